//! Spectral diffusion: temporal variance of the qubit depolarization rate
//! driven by low-energy two-level fluctuators (TLFs) shifting the
//! frequencies of near-resonant TLSs.
//!
//! To first order in the TLS–TLF coupling, Γ₁ = Γ₁⁽⁰⁾ + Γ₁⁽¹⁾ Σᵢ gᵢ σ_z,i;
//! the stationary variance over TLF states is (Γ₁⁽¹⁾)² G² with
//! G² = Σᵢ gᵢ²(1 − tanh²(βω_t,i/2)).

use crate::ensemble::{
    integrate_weighted, resonance_hint, Alpha, EnsembleEstimate, EnsembleSpec, Method, MethodTag,
};
use crate::physcore::{tls_rates, BathSpec, TlsParams, TlsRates};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Aggregate TLF fluctuation strength G², optionally backed by a microscopic
/// list of (coupling gᵢ, TLF eigenfrequency ω_t,i) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDiffusionSpec {
    g_squared: f64,
    tlf_ensemble: Option<Vec<(f64, f64)>>,
}

impl SpectralDiffusionSpec {
    /// Scalar G² ≥ 0.
    pub fn new(g_squared: f64) -> Result<Self> {
        if !(g_squared >= 0.0) {
            return Err(Error::invalid("g_squared", g_squared, "must be >= 0"));
        }
        Ok(SpectralDiffusionSpec {
            g_squared,
            tlf_ensemble: None,
        })
    }

    /// Microscopic G² from a TLF list at inverse temperature `beta`:
    /// G² = Σ gᵢ² (1 − tanh²(βω_t,i/2)).
    pub fn from_tlf_ensemble(tlfs: Vec<(f64, f64)>, beta: f64) -> Result<Self> {
        for (g, wt) in &tlfs {
            if !g.is_finite() || !(*wt > 0.0) {
                return Err(Error::invalid("tlf_ensemble", *wt, "TLF frequencies must be > 0"));
            }
        }
        let g_squared = microscopic_g_squared(&tlfs, beta);
        Ok(SpectralDiffusionSpec {
            g_squared,
            tlf_ensemble: Some(tlfs),
        })
    }

    pub fn g_squared(&self) -> f64 {
        self.g_squared
    }

    pub fn tlf_ensemble(&self) -> Option<&[(f64, f64)]> {
        self.tlf_ensemble.as_deref()
    }

    /// Recheck the microscopic sum against the stored scalar.
    pub fn is_consistent(&self, beta: f64) -> bool {
        match &self.tlf_ensemble {
            None => true,
            Some(tlfs) => {
                let sum = microscopic_g_squared(tlfs, beta);
                (sum - self.g_squared).abs() <= 1e-12 * self.g_squared.max(1e-300)
            }
        }
    }
}

fn microscopic_g_squared(tlfs: &[(f64, f64)], beta: f64) -> f64 {
    tlfs.iter()
        .map(|(g, wt)| g * g * (1.0 - (0.5 * beta * wt).tanh().powi(2)))
        .sum()
}

/// Zeroth- and first-order coefficients of Γ₁ in the TLF-induced frequency
/// shift: Γ₁⁽⁰⁾ = κ²M₁² sin²θ 2γ₂/(γ₂² + ω_δ²) and
/// Γ₁⁽¹⁾ = κ²M₁² sin²θ 4γ₂ω_δ/(γ₂² + ω_δ²)².
pub fn gamma1_coeffs(
    tls: &TlsParams,
    rates: &TlsRates,
    omega_q: f64,
    kappa_m1: f64,
) -> (f64, f64) {
    let detuning = omega_q - tls.omega_t();
    let g2 = rates.gamma_2;
    let denom = g2 * g2 + detuning * detuning;
    let k2s2 = kappa_m1 * kappa_m1 * tls.sin_theta().powi(2);
    (
        k2s2 * 2.0 * g2 / denom,
        k2s2 * 4.0 * g2 * detuning / (denom * denom),
    )
}

/// Stationary spectral-diffusion variance from one TLS: (Γ₁⁽¹⁾)² G².
pub fn var_spd_single(
    tls: &TlsParams,
    rates: &TlsRates,
    omega_q: f64,
    kappa_m1: f64,
    sd: &SpectralDiffusionSpec,
) -> f64 {
    let (_, g1_1) = gamma1_coeffs(tls, rates, omega_q, kappa_m1);
    g1_1 * g1_1 * sd.g_squared()
}

/// Closed form of ⟨Var_spd(Γ₁)⟩_ens: κ⁴G²M₁⁴𝒩πω_q/4γ_φ³ (α = 1) or
/// 2κ⁴G²M₁⁴𝒩π/3γ_φ³ (α = 0).
pub fn closed_form_var_spd(
    spec: &EnsembleSpec,
    bath: &BathSpec,
    omega_q: f64,
    kappa_m1: f64,
    sd: &SpectralDiffusionSpec,
) -> f64 {
    let k4 = kappa_m1.powi(4);
    let n = spec.normalization();
    let g3 = bath.gamma_phi_const.powi(3);
    match spec.alpha {
        Alpha::One => k4 * sd.g_squared() * n * PI * omega_q / (4.0 * g3),
        Alpha::Zero => 2.0 * k4 * sd.g_squared() * n * PI / (3.0 * g3),
    }
}

/// Ensemble average of the spectral-diffusion variance,
/// ⟨Var_spd(Γ₁)⟩ = ∬ P (Γ₁⁽¹⁾)² G² dε dΔ.
pub fn var_spd_ensemble(
    spec: &EnsembleSpec,
    bath: &BathSpec,
    omega_q: f64,
    kappa_m1: f64,
    sd: &SpectralDiffusionSpec,
    method: Method,
) -> Result<EnsembleEstimate> {
    let est = match method {
        Method::ClosedForm => EnsembleEstimate {
            value: closed_form_var_spd(spec, bath, omega_q, kappa_m1, sd),
            numerical_error: 0.0,
            method: MethodTag::ClosedForm,
        },
        Method::Quadrature { rel_tol } => {
            let hint = resonance_hint(bath, omega_q);
            let g2 = sd.g_squared();
            let value = integrate_weighted(spec, &[hint], rel_tol, |tls| {
                let rates = tls_rates(tls, bath);
                let (_, g1_1) = gamma1_coeffs(tls, &rates, omega_q, kappa_m1);
                g1_1 * g1_1 * g2
            })?;
            EnsembleEstimate {
                value,
                numerical_error: rel_tol * value.abs(),
                method: MethodTag::Quadrature,
            }
        }
        Method::MonteCarlo { .. } => {
            return Err(Error::invalid(
                "method",
                2.0,
                "spectral-diffusion ensemble average supports quadrature and closed form",
            ));
        }
    };
    Ok(est)
}
