//! Ensemble of TLSs: joint parameter distribution, sampling, quadrature and
//! Monte Carlo statistics of the qubit depolarization rate, and the closed
//! forms used as mutual oracles.
//!
//! The joint density is P(ε, Δ) = 𝒩(α) ε^α/Δ on the box
//! [ε_m, ε_M] × [Δ_m, Δ_M], with α ∈ {0, 1} selecting the white-noise or
//! Ohmic high-frequency behavior.

use crate::physcore::{tls_rates, BathSpec, TlsParams};
use crate::quad::{self, QuadOptions};
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::cell::RefCell;
use std::f64::consts::PI;

/// Exponent of the bias-energy factor in P(ε, Δ) ∝ ε^α/Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Alpha {
    /// α = 0: P ∝ 1/Δ, white high-frequency noise.
    Zero,
    /// α = 1: P ∝ ε/Δ, Ohmic high-frequency noise.
    One,
}

impl Alpha {
    pub fn as_f64(self) -> f64 {
        match self {
            Alpha::Zero => 0.0,
            Alpha::One => 1.0,
        }
    }

    pub fn from_int(v: i64) -> Result<Self> {
        match v {
            0 => Ok(Alpha::Zero),
            1 => Ok(Alpha::One),
            _ => Err(Error::invalid("alpha", v as f64, "alpha must be 0 or 1")),
        }
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_f64() as i64)
    }
}

/// Parameter box and exponent of the joint TLS distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub alpha: Alpha,
    pub eps_min: f64,
    pub eps_max: f64,
    pub delta_min: f64,
    pub delta_max: f64,
}

impl EnsembleSpec {
    pub fn new(alpha: Alpha, eps_min: f64, eps_max: f64, delta_min: f64, delta_max: f64) -> Result<Self> {
        if !(eps_min >= 0.0) {
            return Err(Error::invalid("eps_min", eps_min, "must be >= 0"));
        }
        if !(eps_max > eps_min) {
            return Err(Error::invalid("eps_max", eps_max, "must exceed eps_min"));
        }
        if !(delta_min > 0.0) {
            return Err(Error::invalid("delta_min", delta_min, "must be > 0"));
        }
        if !(delta_max > delta_min) {
            return Err(Error::invalid("delta_max", delta_max, "must exceed delta_min"));
        }
        Ok(EnsembleSpec {
            alpha,
            eps_min,
            eps_max,
            delta_min,
            delta_max,
        })
    }

    /// Normalization 𝒩(α) with
    /// 𝒩⁻¹ = ((ε_M+ε_m)/2)^α (ε_M−ε_m) log(Δ_M/Δ_m).
    pub fn normalization(&self) -> f64 {
        let eps_factor = match self.alpha {
            Alpha::Zero => 1.0,
            Alpha::One => 0.5 * (self.eps_max + self.eps_min),
        };
        1.0 / (eps_factor * (self.eps_max - self.eps_min) * (self.delta_max / self.delta_min).ln())
    }

    /// Joint density P(ε, Δ); zero outside the box.
    pub fn density(&self, epsilon: f64, delta: f64) -> f64 {
        if epsilon < self.eps_min
            || epsilon > self.eps_max
            || delta < self.delta_min
            || delta > self.delta_max
        {
            return 0.0;
        }
        let eps_pow = match self.alpha {
            Alpha::Zero => 1.0,
            Alpha::One => epsilon,
        };
        self.normalization() * eps_pow / delta
    }

    /// Largest eigenfrequency on the box.
    pub fn omega_t_max(&self) -> f64 {
        self.eps_max.hypot(self.delta_max)
    }
}

/// Inverse-CDF draw from the marginals: Δ log-uniform, ε uniform (α = 0)
/// or ε = √(ε_m² + u(ε_M² − ε_m²)) (α = 1). Exposed separately from the
/// RNG wrapper so CDF endpoints are directly testable.
pub fn sample_from_uniforms(spec: &EnsembleSpec, u_eps: f64, u_delta: f64) -> TlsParams {
    let delta = spec.delta_min * (spec.delta_max / spec.delta_min).powf(u_delta);
    let epsilon = match spec.alpha {
        Alpha::Zero => spec.eps_min + u_eps * (spec.eps_max - spec.eps_min),
        Alpha::One => {
            (spec.eps_min * spec.eps_min
                + u_eps * (spec.eps_max * spec.eps_max - spec.eps_min * spec.eps_min))
                .sqrt()
        }
    };
    TlsParams::new(epsilon, delta).expect("box bounds keep parameters valid")
}

/// Draw one TLS from the joint distribution.
pub fn sample_tls<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> TlsParams {
    let u_eps: f64 = rng.gen();
    let u_delta: f64 = rng.gen();
    sample_from_uniforms(spec, u_eps, u_delta)
}

/// How an ensemble statistic was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Quadrature,
    ClosedForm,
    MonteCarlo,
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MethodTag::Quadrature => "quadrature",
            MethodTag::ClosedForm => "closed_form",
            MethodTag::MonteCarlo => "monte_carlo",
        };
        write!(f, "{s}")
    }
}

/// Evaluation strategy for ensemble statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Quadrature { rel_tol: f64 },
    ClosedForm,
    MonteCarlo { samples: u64, seed: u64 },
}

impl Method {
    pub fn tag(&self) -> MethodTag {
        match self {
            Method::Quadrature { .. } => MethodTag::Quadrature,
            Method::ClosedForm => MethodTag::ClosedForm,
            Method::MonteCarlo { .. } => MethodTag::MonteCarlo,
        }
    }
}

/// One ensemble statistic with its numerical-error estimate
/// (quadrature error bound or Monte Carlo standard error; zero for closed
/// forms).
#[derive(Debug, Clone, Copy)]
pub struct EnsembleEstimate {
    pub value: f64,
    pub numerical_error: f64,
    pub method: MethodTag,
}

/// Mean and variance of the single-TLS qubit depolarization rate.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleStats {
    pub mean_gamma1: f64,
    pub var_gamma1_ens: f64,
    pub method: MethodTag,
    pub numerical_error: f64,
}

/// Statistics of the total rate and lifetime for `n_tls` independent TLSs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalRateStats {
    pub mean_gamma_tot: f64,
    pub var_gamma_tot: f64,
    pub mean_t1: f64,
    pub var_t1: f64,
}

// ---------------------------------------------------------------------------
// Box quadrature machinery shared by the ensemble-average family.
// ---------------------------------------------------------------------------

/// A sharp feature at eigenfrequency `omega` with characteristic width
/// `width`; the integrator places panel edges on the corresponding arcs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RidgeHint {
    pub omega: f64,
    pub width: f64,
}

const RIDGE_WINDOW: f64 = 10.0;

fn ridge_targets(hints: &[RidgeHint]) -> Vec<f64> {
    let mut targets = Vec::with_capacity(hints.len() * 3);
    for h in hints {
        targets.push(h.omega);
        if h.width > 0.0 {
            targets.push(h.omega - RIDGE_WINDOW * h.width);
            targets.push(h.omega + RIDGE_WINDOW * h.width);
        }
    }
    targets.retain(|t| t.is_finite() && *t > 0.0);
    targets
}

/// ∬ P(ε, Δ) g(tls) dε dΔ over the box, by nested adaptive quadrature.
///
/// Inner variable is ln Δ (the log-uniform marginal makes the weight flat);
/// outer variable is ε. `hints` mark eigenfrequency arcs ω_t = const where
/// g varies sharply.
pub(crate) fn integrate_weighted<G>(
    spec: &EnsembleSpec,
    hints: &[RidgeHint],
    rel_tol: f64,
    g: G,
) -> Result<f64>
where
    G: Fn(&TlsParams) -> f64,
{
    let norm = spec.normalization();
    let targets = ridge_targets(hints);
    let u_min = spec.delta_min.ln();
    let u_max = spec.delta_max.ln();

    let inner_opts = QuadOptions {
        rel_tol: 0.5 * rel_tol,
        abs_tol: 0.0,
        max_panels: 1200,
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);

    let outer_integrand = |eps: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        // Panel edges where a hinted arc crosses this epsilon-slice.
        let mut edges = vec![u_min, u_max];
        for &t in &targets {
            if t > eps {
                let d = (t * t - eps * eps).sqrt();
                if d > spec.delta_min && d < spec.delta_max {
                    edges.push(d.ln());
                }
            }
        }
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup();

        let eps_weight = match spec.alpha {
            Alpha::Zero => 1.0,
            Alpha::One => eps,
        };
        let inner = quad::integrate_segmented(
            |u: f64| {
                let delta = u.exp();
                let tls = match TlsParams::new(eps, delta) {
                    Ok(t) => t,
                    Err(_) => return 0.0,
                };
                g(&tls)
            },
            &edges,
            inner_opts,
        );
        match inner {
            Ok(q) => eps_weight * q.value,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };

    // Outer edges where the hinted arcs enter/exit the box.
    let mut outer_edges = vec![spec.eps_min, spec.eps_max];
    for &t in &targets {
        for boundary_delta in [spec.delta_min, spec.delta_max] {
            if t > boundary_delta {
                let e = (t * t - boundary_delta * boundary_delta).sqrt();
                if e > spec.eps_min && e < spec.eps_max {
                    outer_edges.push(e);
                }
            }
        }
    }
    outer_edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    outer_edges.dedup();

    let outer_opts = QuadOptions {
        rel_tol,
        abs_tol: 0.0,
        max_panels: 1600,
    };
    let q = quad::integrate_segmented(outer_integrand, &outer_edges, outer_opts)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(norm * q.value)
}

/// Default hint set for integrands carrying the qubit resonance at ω_q:
/// the near-resonance dephasing scale is γ_φ plus the phonon rate of a
/// maximally transverse TLS at ω_q.
pub(crate) fn resonance_hint(bath: &BathSpec, omega_q: f64) -> RidgeHint {
    let f = PI
        * bath.j0
        * omega_q
        * (1.0 / (0.5 * bath.beta() * omega_q).tanh())
        * (-omega_q * omega_q / (2.0 * bath.omega_d * bath.omega_d)).exp();
    RidgeHint {
        omega: omega_q,
        width: bath.gamma_phi_const + omega_q * omega_q * f,
    }
}

fn check_omega_q(spec: &EnsembleSpec, omega_q: f64) -> Result<()> {
    if !(omega_q > spec.eps_min && omega_q < spec.omega_t_max()) {
        return Err(Error::invalid(
            "omega_q",
            omega_q,
            "qubit frequency must lie inside the ensemble eigenfrequency window",
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Mean and variance of the qubit depolarization rate.
// ---------------------------------------------------------------------------

/// Closed form of ⟨Γ₁⟩_ens: κ²M₁²𝒩πω_q (α = 1) or 2κ²M₁²𝒩π (α = 0).
pub fn closed_form_mean_gamma1(spec: &EnsembleSpec, omega_q: f64, kappa_m1: f64) -> f64 {
    let k2 = kappa_m1 * kappa_m1;
    match spec.alpha {
        Alpha::One => k2 * spec.normalization() * PI * omega_q,
        Alpha::Zero => 2.0 * k2 * spec.normalization() * PI,
    }
}

/// Closed form of Var_ens(Γ₁): κ⁴M₁⁴𝒩πω_q/2γ_φ (α = 1) or
/// 4κ⁴M₁⁴𝒩π/3γ_φ (α = 0).
pub fn closed_form_var_gamma1(
    spec: &EnsembleSpec,
    bath: &BathSpec,
    omega_q: f64,
    kappa_m1: f64,
) -> f64 {
    let k4 = kappa_m1.powi(4);
    let n = spec.normalization();
    let gphi = bath.gamma_phi_const;
    match spec.alpha {
        Alpha::One => k4 * n * PI * omega_q / (2.0 * gphi),
        Alpha::Zero => 4.0 * k4 * n * PI / (3.0 * gphi),
    }
}

fn gamma1_of(tls: &TlsParams, bath: &BathSpec, omega_q: f64, kappa_m1: f64) -> f64 {
    let rates = tls_rates(tls, bath);
    let detuning = omega_q - tls.omega_t();
    let g2 = rates.gamma_2;
    kappa_m1 * kappa_m1 * tls.sin_theta().powi(2) * 2.0 * g2 / (detuning * detuning + g2 * g2)
}

/// Average qubit depolarization rate over TLS realizations,
/// ⟨Γ₁⟩ = ∬ P(ε,Δ) Γ₁ dε dΔ.
pub fn mean_gamma1(
    spec: &EnsembleSpec,
    bath: &BathSpec,
    omega_q: f64,
    kappa_m1: f64,
    method: Method,
) -> Result<EnsembleEstimate> {
    check_omega_q(spec, omega_q)?;
    let est = match method {
        Method::ClosedForm => EnsembleEstimate {
            value: closed_form_mean_gamma1(spec, omega_q, kappa_m1),
            numerical_error: 0.0,
            method: MethodTag::ClosedForm,
        },
        Method::Quadrature { rel_tol } => {
            let hint = resonance_hint(bath, omega_q);
            let value = integrate_weighted(spec, &[hint], rel_tol, |tls| {
                gamma1_of(tls, bath, omega_q, kappa_m1)
            })?;
            EnsembleEstimate {
                value,
                numerical_error: rel_tol * value.abs(),
                method: MethodTag::Quadrature,
            }
        }
        Method::MonteCarlo { samples, seed } => {
            let (mean, se) = monte_carlo_mean(spec, samples, seed, |tls| {
                gamma1_of(tls, bath, omega_q, kappa_m1)
            });
            EnsembleEstimate {
                value: mean,
                numerical_error: se,
                method: MethodTag::MonteCarlo,
            }
        }
    };
    Ok(est)
}

fn monte_carlo_mean<F>(spec: &EnsembleSpec, samples: u64, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&TlsParams) -> f64 + Sync + Send,
{
    // Fixed chunk count with one ChaCha stream per chunk, merged in chunk
    // order: the estimate depends on the seed alone, not the thread schedule.
    const CHUNKS: u64 = 64;
    let base = samples / CHUNKS;
    let rem = samples % CHUNKS;
    let spec = *spec;
    let partials: Vec<(f64, f64, u64)> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let n = base + if c < rem { 1 } else { 0 };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..n {
                let v = f(&sample_tls(&spec, &mut rng));
                sum += v;
                sumsq += v * v;
            }
            (sum, sumsq, n)
        })
        .collect();
    let (sum, sumsq, n) = partials
        .iter()
        .fold((0.0, 0.0, 0u64), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2 + p.2));
    let n = n as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// Variance of the qubit depolarization rate over TLS realizations,
/// Var_ens(Γ₁) ≈ ⟨Γ₁²⟩ = ∬ P(ε,Δ) Γ₁² dε dΔ.
pub fn var_gamma1_ens(
    spec: &EnsembleSpec,
    bath: &BathSpec,
    omega_q: f64,
    kappa_m1: f64,
    method: Method,
) -> Result<EnsembleEstimate> {
    check_omega_q(spec, omega_q)?;
    let est = match method {
        Method::ClosedForm => EnsembleEstimate {
            value: closed_form_var_gamma1(spec, bath, omega_q, kappa_m1),
            numerical_error: 0.0,
            method: MethodTag::ClosedForm,
        },
        Method::Quadrature { rel_tol } => {
            let hint = resonance_hint(bath, omega_q);
            let value = integrate_weighted(spec, &[hint], rel_tol, |tls| {
                gamma1_of(tls, bath, omega_q, kappa_m1).powi(2)
            })?;
            EnsembleEstimate {
                value,
                numerical_error: rel_tol * value.abs(),
                method: MethodTag::Quadrature,
            }
        }
        Method::MonteCarlo { samples, seed } => {
            let (mean, se) = monte_carlo_mean(spec, samples, seed, |tls| {
                gamma1_of(tls, bath, omega_q, kappa_m1).powi(2)
            });
            EnsembleEstimate {
                value: mean,
                numerical_error: se,
                method: MethodTag::MonteCarlo,
            }
        }
    };
    Ok(est)
}

/// Mean and variance in one call, sharing the method.
pub fn ensemble_stats(
    spec: &EnsembleSpec,
    bath: &BathSpec,
    omega_q: f64,
    kappa_m1: f64,
    method: Method,
) -> Result<EnsembleStats> {
    let mean = mean_gamma1(spec, bath, omega_q, kappa_m1, method)?;
    let var = var_gamma1_ens(spec, bath, omega_q, kappa_m1, method)?;
    Ok(EnsembleStats {
        mean_gamma1: mean.value,
        var_gamma1_ens: var.value,
        method: method.tag(),
        numerical_error: mean.numerical_error.max(var.numerical_error),
    })
}

/// Semi-analytic route for α = 1: the 2D integral reduced to a single
/// eigenfrequency integral with the dephasing-rate integration done in
/// closed form. Serves as a third cross-check between the full quadrature
/// and the delta-function closed form.
///
/// The integration bounds respect the parameter box exactly (the inner
/// dephasing-rate window is clipped where the ω_t arc leaves the box), so
/// agreement with the 2D quadrature is limited only by the integrators.
pub fn semianalytic_mean_gamma1(
    spec: &EnsembleSpec,
    bath: &BathSpec,
    omega_q: f64,
    kappa_m1: f64,
) -> Result<f64> {
    if spec.alpha != Alpha::One {
        return Err(Error::invalid(
            "alpha",
            spec.alpha.as_f64(),
            "semi-analytic reduction applies to alpha = 1 only",
        ));
    }
    check_omega_q(spec, omega_q)?;
    let gphi = bath.gamma_phi_const;
    let beta = bath.beta();
    // Phonon kernel f(w) with the Debye factor kept, so the route matches
    // the 2D integrand exactly.
    let f_of = |w: f64| {
        PI * bath.j0
            * w
            * (1.0 / (0.5 * beta * w).tanh())
            * (-w * w / (2.0 * bath.omega_d * bath.omega_d)).exp()
    };

    let wt_lo = spec.eps_min.hypot(spec.delta_min);
    let wt_hi = spec.omega_t_max();
    let integrand = |wt: f64| -> f64 {
        let d_lo = spec
            .delta_min
            .max((wt * wt - spec.eps_max * spec.eps_max).max(0.0).sqrt());
        let d_hi = spec
            .delta_max
            .min((wt * wt - spec.eps_min * spec.eps_min).max(0.0).sqrt());
        if d_hi <= d_lo {
            return 0.0;
        }
        let f = f_of(wt);
        let g2_lo = d_lo * d_lo * f + gphi;
        let g2_hi = d_hi * d_hi * f + gphi;
        let det = omega_q - wt;
        let det2 = det * det;
        let log_ratio = ((g2_hi * g2_hi + det2) / (g2_lo * g2_lo + det2)).ln();
        log_ratio / (2.0 * wt * f)
    };

    let hint = resonance_hint(bath, omega_q);
    let edges = quad::edges_with_breakpoints(
        wt_lo,
        wt_hi,
        &[
            omega_q - RIDGE_WINDOW * hint.width,
            omega_q,
            omega_q + RIDGE_WINDOW * hint.width,
            spec.delta_max,
            spec.eps_max.hypot(spec.delta_min),
        ],
    );
    let q = quad::integrate_segmented(integrand, &edges, QuadOptions::with_rel_tol(1e-9))?;
    Ok(kappa_m1 * kappa_m1 * spec.normalization() * q.value)
}

/// Statistics of the total rate Γ_tot = Σ Γ₁ and of T₁ = 1/Γ_tot for
/// `n_tls` independent, identically distributed TLSs.
pub fn total_rate_stats(stats: &EnsembleStats, n_tls: f64) -> Result<TotalRateStats> {
    if !(n_tls >= 1.0) {
        return Err(Error::invalid("n_tls", n_tls, "needs at least one TLS"));
    }
    let mean_tot = n_tls * stats.mean_gamma1;
    let var_tot = n_tls * stats.var_gamma1_ens;
    if mean_tot == 0.0 {
        return Err(Error::invalid(
            "mean_gamma_tot",
            mean_tot,
            "zero mean rate: lifetime statistics undefined",
        ));
    }
    Ok(TotalRateStats {
        mean_gamma_tot: mean_tot,
        var_gamma_tot: var_tot,
        mean_t1: 1.0 / mean_tot,
        var_t1: var_tot / mean_tot.powi(4),
    })
}
