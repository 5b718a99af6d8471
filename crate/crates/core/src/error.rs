use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received a value outside its domain.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Division by a vanishing TLS depolarization rate.
    #[error("frozen TLS: depolarization rate gamma_1 = 0, qubit dephasing rate is undefined")]
    FrozenTls,

    /// Adaptive quadrature exhausted its panel budget before reaching the
    /// requested tolerance. `achieved` is the relative error estimate of the
    /// best value found, which is carried along for diagnostics.
    #[error("quadrature did not converge: requested rel. tol. {requested:.3e}, achieved {achieved:.3e} (value {value:.6e})")]
    QuadratureNonConvergent {
        requested: f64,
        achieved: f64,
        value: f64,
    },

    /// The cutoff fixed-point iteration failed to settle.
    #[error("cutoff schedule did not converge after {iterations} iterations; last iterate {last:.6e} rad/ns")]
    CutoffNonConvergent { iterations: usize, last: f64 },

    /// The sampled spectrum grid does not cover the requested band.
    #[error("spectrum grid [{grid_lo:.3e}, {grid_hi:.3e}] rad/ns does not cover required [{need_lo:.3e}, {need_hi:.3e}] rad/ns")]
    SpectrumGridGap {
        grid_lo: f64,
        grid_hi: f64,
        need_lo: f64,
        need_hi: f64,
    },

    /// Eigenvalue solver failure or failed truncation-convergence check.
    #[error("transmon diagonalization failed: {0}")]
    Eigen(String),

    /// Configuration file or field is invalid.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}
