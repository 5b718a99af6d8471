//! Single-TLS physics: eigenstructure, phonon-bath rates, noise spectral
//! densities, and the qubit decoherence rates induced by one TLS.
//!
//! A TLS is a double-well defect with bias energy ε and tunneling amplitude
//! Δ, eigenfrequency ω_t = √(ε² + Δ²) and mixing angle tan θ = Δ/ε. Coupled
//! to a phonon bath it relaxes at γ↓, excites at γ↑ and dephases at
//! γ₂ = γ₁/2 + γ_φ. The σx spectral density (two Lorentzians at ±ω_t)
//! drives qubit depolarization; the σz Lorentzian at zero frequency drives
//! qubit dephasing.

use crate::{Error, Result};
use std::f64::consts::PI;

/// One TLS: bias energy and tunneling amplitude, both rad/ns, with the
/// derived eigenfrequency and mixing angle cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsParams {
    epsilon: f64,
    delta: f64,
    omega_t: f64,
    theta: f64,
}

impl TlsParams {
    /// `epsilon >= 0`, `delta > 0` (both rad/ns).
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::invalid("epsilon", epsilon, "bias energy must be >= 0"));
        }
        if !(delta > 0.0) {
            return Err(Error::invalid("delta", delta, "tunneling amplitude must be > 0"));
        }
        let omega_t = epsilon.hypot(delta);
        Ok(TlsParams {
            epsilon,
            delta,
            omega_t,
            theta: delta.atan2(epsilon),
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Eigenfrequency ω_t = √(ε² + Δ²).
    pub fn omega_t(&self) -> f64 {
        self.omega_t
    }

    /// Mixing angle θ ∈ (0, π/2], tan θ = Δ/ε.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// sin θ = Δ/ω_t (transverse coupling weight).
    pub fn sin_theta(&self) -> f64 {
        self.delta / self.omega_t
    }

    /// cos θ = ε/ω_t (longitudinal coupling weight).
    pub fn cos_theta(&self) -> f64 {
        self.epsilon / self.omega_t
    }
}

/// Phonon bath plus the constant intrinsic TLS pure-dephasing rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    /// Phonon coupling J₀ (ns²).
    pub j0: f64,
    /// Debye cutoff ω_D (rad/ns).
    pub omega_d: f64,
    /// Temperature (rad/ns).
    pub temperature: f64,
    /// Intrinsic TLS pure dephasing γ_φ (rad/ns).
    pub gamma_phi_const: f64,
}

impl BathSpec {
    pub fn new(j0: f64, omega_d: f64, temperature: f64, gamma_phi_const: f64) -> Result<Self> {
        if !(j0 > 0.0) {
            return Err(Error::invalid("j0", j0, "phonon coupling must be > 0"));
        }
        if !(omega_d > 0.0) {
            return Err(Error::invalid("omega_d", omega_d, "Debye cutoff must be > 0"));
        }
        if !(temperature > 0.0) {
            return Err(Error::invalid("temperature", temperature, "temperature must be > 0"));
        }
        if !(gamma_phi_const >= 0.0) {
            return Err(Error::invalid(
                "gamma_phi_const",
                gamma_phi_const,
                "pure dephasing rate must be >= 0",
            ));
        }
        Ok(BathSpec {
            j0,
            omega_d,
            temperature,
            gamma_phi_const,
        })
    }

    /// Inverse temperature 1/T (ns/rad).
    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }
}

/// Bath-induced rates of one TLS and its equilibrium polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsRates {
    pub gamma_down: f64,
    pub gamma_up: f64,
    /// Intrinsic pure dephasing, carried through from the bath.
    pub gamma_phi: f64,
    /// γ₁ = γ↓ + γ↑.
    pub gamma_1: f64,
    /// γ₂ = γ₁/2 + γ_φ.
    pub gamma_2: f64,
    /// ⟨σz⟩_eq = (γ↑ − γ↓)/(γ↑ + γ↓) = −tanh(βω_t/2).
    pub sz_eq: f64,
}

/// Phonon spectral density J(ω) = J₀ ω³ exp(−ω²/2ω_D²).
pub fn phonon_spectral_density(omega: f64, bath: &BathSpec) -> Result<f64> {
    if omega < 0.0 {
        return Err(Error::invalid("omega", omega, "spectral density argument must be >= 0"));
    }
    Ok(bath.j0 * omega.powi(3) * (-omega * omega / (2.0 * bath.omega_d * bath.omega_d)).exp())
}

/// Bose–Einstein occupation at inverse temperature β.
fn bose_einstein(omega: f64, beta: f64) -> f64 {
    1.0 / (beta * omega).exp_m1()
}

/// Relaxation, excitation and derived rates of one TLS in the phonon bath:
/// γ↓ = 2π(Δ²/ω_t²)J(ω_t)[n_B+1], γ↑ = 2π(Δ²/ω_t²)J(ω_t)n_B.
pub fn tls_rates(tls: &TlsParams, bath: &BathSpec) -> TlsRates {
    let wt = tls.omega_t();
    let j = phonon_spectral_density(wt, bath).expect("omega_t >= 0 by construction");
    let coupling = 2.0 * PI * tls.sin_theta().powi(2) * j;
    let n_b = bose_einstein(wt, bath.beta());
    let gamma_down = coupling * (n_b + 1.0);
    let gamma_up = coupling * n_b;
    let gamma_1 = gamma_down + gamma_up;
    TlsRates {
        gamma_down,
        gamma_up,
        gamma_phi: bath.gamma_phi_const,
        gamma_1,
        gamma_2: 0.5 * gamma_1 + bath.gamma_phi_const,
        // (γ↑ − γ↓)/(γ↑ + γ↓) = −tanh(βω_t/2); the tanh form avoids
        // 0/0 when both rates underflow at large βω_t.
        sz_eq: -(0.5 * bath.beta() * wt).tanh(),
    }
}

/// Closed-form relaxation of the TLS polarization:
/// σz(t) = sz_eq + (σz(0) − sz_eq) e^(−γ₁ t).
pub fn polarization_decay(sz0: f64, t: f64, rates: &TlsRates) -> f64 {
    rates.sz_eq + (sz0 - rates.sz_eq) * (-rates.gamma_1 * t).exp()
}

/// Transverse (σx) spectral density: Lorentzians of half-width γ₂ at ±ω_t,
/// weighted by (1 ∓ ⟨σz⟩_eq)/2.
pub fn s_xx(omega: f64, tls: &TlsParams, rates: &TlsRates) -> f64 {
    let wt = tls.omega_t();
    let g2 = rates.gamma_2;
    let lorentz = |center: f64| 2.0 * g2 / ((omega - center).powi(2) + g2 * g2);
    0.5 * (1.0 - rates.sz_eq) * lorentz(wt) + 0.5 * (1.0 + rates.sz_eq) * lorentz(-wt)
}

/// Longitudinal (σz) spectral density: (1 − ⟨σz⟩²) 2γ₁/(ω² + γ₁²).
pub fn s_zz(omega: f64, rates: &TlsRates) -> f64 {
    (1.0 - rates.sz_eq * rates.sz_eq) * 2.0 * rates.gamma_1
        / (omega * omega + rates.gamma_1 * rates.gamma_1)
}

/// Qubit depolarization and pure-dephasing rates induced by one TLS:
/// Γ₁ = (κM₁)² sin²θ · 2γ₂/(ω_δ² + γ₂²) with ω_δ = ω_q − ω_t, and
/// Γ_φ = (κM_φ)² cos²θ (1 − ⟨σz⟩²)/γ₁.
pub fn qubit_rates_single_tls(
    omega_q: f64,
    kappa_m1: f64,
    kappa_mphi: f64,
    tls: &TlsParams,
    rates: &TlsRates,
) -> Result<(f64, f64)> {
    if !(omega_q > 0.0) {
        return Err(Error::invalid("omega_q", omega_q, "qubit frequency must be > 0"));
    }
    if rates.gamma_1 == 0.0 {
        return Err(Error::FrozenTls);
    }
    let detuning = omega_q - tls.omega_t();
    let g2 = rates.gamma_2;
    let gamma1_q = kappa_m1 * kappa_m1 * tls.sin_theta().powi(2) * 2.0 * g2
        / (detuning * detuning + g2 * g2);
    let gamma_phi_q = kappa_mphi * kappa_mphi
        * tls.cos_theta().powi(2)
        * (1.0 - rates.sz_eq * rates.sz_eq)
        / rates.gamma_1;
    Ok((gamma1_q, gamma_phi_q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ghz_to_rad_ns, kelvin_to_rad_ns, mhz_to_rad_ns, mk_to_rad_ns, ps2_to_ns2};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn paper_bath() -> BathSpec {
        BathSpec::new(
            ps2_to_ns2(0.047),
            ghz_to_rad_ns(1000.0),
            mk_to_rad_ns(20.0),
            mhz_to_rad_ns(10.0),
        )
        .unwrap()
    }

    #[test]
    fn tls_params_invariants() {
        let tls = TlsParams::new(3.0, 4.0).unwrap();
        assert_relative_eq!(tls.omega_t(), 5.0, max_relative = 1e-15);
        assert!(tls.omega_t() >= tls.epsilon().max(tls.delta()));
        assert!(tls.theta() > 0.0 && tls.theta() <= std::f64::consts::FRAC_PI_2);
        let s2c2 = tls.sin_theta().powi(2) + tls.cos_theta().powi(2);
        assert_abs_diff_eq!(s2c2, 1.0, epsilon = 1e-15);
        assert!(TlsParams::new(-1.0, 1.0).is_err());
        assert!(TlsParams::new(1.0, 0.0).is_err());
    }

    #[test]
    fn spectral_density_zero_and_cutoff() {
        let bath = paper_bath();
        assert_eq!(phonon_spectral_density(0.0, &bath).unwrap(), 0.0);
        let wd = bath.omega_d;
        let at_cutoff = phonon_spectral_density(wd, &bath).unwrap();
        assert_relative_eq!(
            at_cutoff,
            bath.j0 * wd.powi(3) * (-0.5f64).exp(),
            max_relative = 1e-14
        );
        assert!(phonon_spectral_density(-1.0, &bath).is_err());
    }

    #[test]
    fn spectral_density_unit_frequency() {
        // J0 = 0.047 ps^2 converted, omega_D >> 1 so the Gaussian is inert.
        let bath = BathSpec::new(4.7e-8, 1e4, 1.0, 0.0).unwrap();
        let j = phonon_spectral_density(1.0, &bath).unwrap();
        assert_relative_eq!(j, 4.7e-8, max_relative = 1e-6);
    }

    #[test]
    fn rates_symmetric_point_frozen_values() {
        // eps/k_B = 1 K, Delta/k_B = 1 K, T = 20 mK, J0 = 0.047 ps^2.
        // Expected values evaluated independently from the two rate formulas
        // with explicit unit conversion.
        let tls = TlsParams::new(kelvin_to_rad_ns(1.0), kelvin_to_rad_ns(1.0)).unwrap();
        let bath = paper_bath();
        let r = tls_rates(&tls, &bath);
        assert_relative_eq!(tls.omega_t(), 185.0781289077669, max_relative = 1e-12);
        assert_relative_eq!(r.gamma_down, 0.9356741277559082, max_relative = 1e-12);
        assert_relative_eq!(r.gamma_up, 1.8275417301371846e-31, max_relative = 1e-9);
        assert_relative_eq!(r.gamma_1, 0.9356741277559082, max_relative = 1e-12);
    }

    #[test]
    fn rates_zero_bias_has_unit_coupling_prefactor() {
        let bath = paper_bath();
        let delta = 1.0;
        let tls = TlsParams::new(0.0, delta).unwrap();
        let r = tls_rates(&tls, &bath);
        // theta = pi/2 so Delta^2/omega_t^2 = 1: gamma_down + gamma_up
        // equals 2 pi J(omega_t) coth(beta omega_t / 2).
        let j = phonon_spectral_density(delta, &bath).unwrap();
        let coth = 1.0 / (0.5 * bath.beta() * delta).tanh();
        assert_relative_eq!(r.gamma_1, 2.0 * std::f64::consts::PI * j * coth, max_relative = 1e-12);
    }

    #[test]
    fn rates_zero_temperature_limit() {
        let cold = BathSpec::new(4.7e-8, 1e4, mk_to_rad_ns(0.1), 0.0).unwrap();
        let tls = TlsParams::new(kelvin_to_rad_ns(1.0), kelvin_to_rad_ns(1.0)).unwrap();
        let r = tls_rates(&tls, &cold);
        assert_eq!(r.gamma_up, 0.0);
        assert_relative_eq!(r.sz_eq, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn polarization_decay_endpoints() {
        let tls = TlsParams::new(1.0, 1.0).unwrap();
        let r = tls_rates(&tls, &paper_bath());
        assert_eq!(polarization_decay(0.3, 0.0, &r), 0.3);
        let late = polarization_decay(0.3, 1e9 / r.gamma_1, &r);
        assert_relative_eq!(late, r.sz_eq, max_relative = 1e-12);
        let one_fold = polarization_decay(1.0, 1.0 / r.gamma_1, &r);
        assert_relative_eq!(
            one_fold,
            r.sz_eq + (1.0 - r.sz_eq) / std::f64::consts::E,
            max_relative = 1e-12
        );
    }

    #[test]
    fn polarization_decay_matches_rk4() {
        // Independent oracle: 4th-order explicit integration of
        // d sigma_z/dt = -gamma_1 (sigma_z - sz_eq).
        let tls = TlsParams::new(2.0, 3.0).unwrap();
        let r = tls_rates(&tls, &paper_bath());
        let rhs = |s: f64| -r.gamma_1 * (s - r.sz_eq);
        let t_end = 10.0 / r.gamma_1;
        let n = 20_000usize;
        let h = t_end / n as f64;
        let mut s = 0.7;
        let mut t = 0.0;
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let k1 = rhs(s);
            let k2 = rhs(s + 0.5 * h * k1);
            let k3 = rhs(s + 0.5 * h * k2);
            let k4 = rhs(s + h * k3);
            s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
            worst = worst.max((s - polarization_decay(0.7, t, &r)).abs());
        }
        assert!(worst < 1e-8, "max deviation {worst}");
    }

    #[test]
    fn szz_peak_area_and_frozen_limit() {
        let tls = TlsParams::new(1.5, 0.5) .unwrap();
        let mut r = tls_rates(&tls, &paper_bath());
        assert_relative_eq!(
            s_zz(0.0, &r),
            2.0 * (1.0 - r.sz_eq * r.sz_eq) / r.gamma_1,
            max_relative = 1e-14
        );
        // Lorentzian area 2 pi (1 - sz_eq^2), checked by quadrature.
        let span = 1e5 * r.gamma_1;
        let q = crate::quad::integrate_segmented(
            |w| s_zz(w, &r),
            &[-span, -10.0 * r.gamma_1, 0.0, 10.0 * r.gamma_1, span],
            crate::quad::QuadOptions::with_rel_tol(1e-9),
        )
        .unwrap();
        let exact = 2.0 * std::f64::consts::PI * (1.0 - r.sz_eq * r.sz_eq);
        // The finite window misses the 2*2/span tail mass.
        assert_relative_eq!(q.value, exact, max_relative = 1e-4);
        // Fully polarized TLS has no sigma-z fluctuations.
        r.sz_eq = -1.0;
        assert_eq!(s_zz(0.3, &r), 0.0);
    }

    #[test]
    fn qubit_rates_resonance_and_angles() {
        let bath = paper_bath();
        let tls = TlsParams::new(3.0, 4.0).unwrap();
        let r = tls_rates(&tls, &bath);
        let (g1_res, _) =
            qubit_rates_single_tls(tls.omega_t(), 2.0, 1.0, &tls, &r).unwrap();
        assert_relative_eq!(
            g1_res,
            4.0 * tls.sin_theta().powi(2) * 2.0 / r.gamma_2,
            max_relative = 1e-14
        );

        // theta = pi/2 kills the dephasing channel.
        let sym = TlsParams::new(0.0, 5.0).unwrap();
        let rs = tls_rates(&sym, &bath);
        let (_, gphi) = qubit_rates_single_tls(7.0, 1.0, 1.0, &sym, &rs).unwrap();
        assert_eq!(gphi, 0.0);

        // Far detuned, Gamma_1 is linear in gamma_2.
        let far = tls.omega_t() + 1e4 * r.gamma_2;
        let (a, _) = qubit_rates_single_tls(far, 1.0, 1.0, &tls, &r).unwrap();
        let mut doubled = r;
        doubled.gamma_2 *= 2.0;
        let (b, _) = qubit_rates_single_tls(far, 1.0, 1.0, &tls, &doubled).unwrap();
        assert_relative_eq!(b / a, 2.0, max_relative = 1e-6);

        let mut frozen = r;
        frozen.gamma_1 = 0.0;
        assert!(matches!(
            qubit_rates_single_tls(7.0, 1.0, 1.0, &tls, &frozen),
            Err(crate::Error::FrozenTls)
        ));
    }

    proptest! {
        #[test]
        fn detailed_balance(eps in 1e-3f64..500.0, delta in 1e-3f64..500.0, t_mk in 1.0f64..4000.0) {
            let tls = TlsParams::new(eps, delta).unwrap();
            let bath = BathSpec::new(4.7e-8, ghz_to_rad_ns(1000.0), mk_to_rad_ns(t_mk), 0.0).unwrap();
            let r = tls_rates(&tls, &bath);
            let expected = (-bath.beta() * tls.omega_t()).exp();
            if expected > 1e-280 {
                let ratio = r.gamma_up / r.gamma_down;
                prop_assert!((ratio / expected - 1.0).abs() < 1e-10,
                    "ratio {} expected {}", ratio, expected);
            }
            // sz_eq in (-1, 0] and equals -tanh(beta omega_t / 2).
            prop_assert!(r.sz_eq > -1.0 - 1e-15 && r.sz_eq <= 0.0);
        }

        #[test]
        fn spectral_densities_nonnegative_and_szz_even(
            eps in 0.0f64..500.0, delta in 1e-3f64..500.0, omega in -2000.0f64..2000.0
        ) {
            let tls = TlsParams::new(eps, delta).unwrap();
            let bath = BathSpec::new(4.7e-8, ghz_to_rad_ns(1000.0), mk_to_rad_ns(20.0), 0.0628).unwrap();
            let r = tls_rates(&tls, &bath);
            prop_assert!(s_xx(omega, &tls, &r) >= 0.0);
            prop_assert!(s_zz(omega, &r) >= 0.0);
            let lhs = s_zz(omega, &r);
            let rhs = s_zz(-omega, &r);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1e-300));
        }

        #[test]
        fn qubit_gamma1_peaks_at_zero_detuning(
            eps in 0.0f64..100.0, delta in 1e-2f64..100.0,
            f1 in 1e-4f64..0.9, f2 in 1e-4f64..0.9
        ) {
            let tls = TlsParams::new(eps, delta).unwrap();
            let bath = paper_bath();
            let r = tls_rates(&tls, &bath);
            let wt = tls.omega_t();
            // Detunings as fractions of omega_t keep omega_q positive.
            let at = |detuning: f64| {
                qubit_rates_single_tls(wt + detuning, 1.0, 1.0, &tls, &r).unwrap().0
            };
            let peak = at(0.0);
            let (lo, hi) = if f1 < f2 { (f1 * wt, f2 * wt) } else { (f2 * wt, f1 * wt) };
            prop_assert!(peak >= at(lo) && peak >= at(-lo));
            prop_assert!(at(lo) >= at(hi) && at(-lo) >= at(-hi));
        }
    }
}
