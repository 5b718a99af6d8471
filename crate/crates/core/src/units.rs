//! Unit conventions and conversions.
//!
//! Every quantity inside the crate is an angular frequency in rad/ns with
//! ħ = k_B = 1. Public constructors accept laboratory units (GHz, mK, K,
//! ps², eV, debye) and convert once at the boundary. Frequency-in-Hz helpers
//! always carry the 2π factor explicitly.

use std::f64::consts::PI;

/// k_B/ħ in rad·ns⁻¹·mK⁻¹: temperature in mK → angular frequency in rad/ns.
pub const KB_RAD_NS_PER_MK: f64 = 0.13087;

/// 1 eV expressed as an angular frequency, E/ħ, in rad/ns.
pub const EV_RAD_NS: f64 = 1.519_267_447e6;

/// 1 debye in C·m.
pub const DEBYE_CM: f64 = 3.335_64e-30;

/// Elementary charge in C.
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;

/// Marker for the internal unit convention (rad/ns, ħ = k_B = 1).
///
/// Carries no data; it exists so conversion helpers have an unambiguous home
/// and so configuration output can name the convention in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UnitSystem;

impl UnitSystem {
    pub const DESCRIPTION: &'static str =
        "internal units: angular frequency rad/ns, hbar = k_B = 1; \
         temperature via k_B/hbar = 0.13087 rad/ns/mK; J0 via ps^2 = 1e-6 ns^2";
}

/// Temperature in mK → rad/ns.
pub fn mk_to_rad_ns(t_mk: f64) -> f64 {
    t_mk * KB_RAD_NS_PER_MK
}

/// rad/ns → temperature in mK.
pub fn rad_ns_to_mk(omega: f64) -> f64 {
    omega / KB_RAD_NS_PER_MK
}

/// Energy given as E/k_B in kelvin → rad/ns.
pub fn kelvin_to_rad_ns(t_k: f64) -> f64 {
    mk_to_rad_ns(t_k * 1e3)
}

/// Ordinary frequency in GHz → angular frequency in rad/ns.
pub fn ghz_to_rad_ns(f_ghz: f64) -> f64 {
    2.0 * PI * f_ghz
}

/// Angular frequency in rad/ns → ordinary frequency in GHz.
pub fn rad_ns_to_ghz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Ordinary frequency in MHz → angular frequency in rad/ns.
pub fn mhz_to_rad_ns(f_mhz: f64) -> f64 {
    ghz_to_rad_ns(f_mhz * 1e-3)
}

/// Ordinary frequency in Hz → angular frequency in rad/ns.
pub fn hz_to_rad_ns(f_hz: f64) -> f64 {
    ghz_to_rad_ns(f_hz * 1e-9)
}

/// Phonon-coupling constant J₀ in ps² → ns².
pub fn ps2_to_ns2(j0_ps2: f64) -> f64 {
    j0_ps2 * 1e-6
}

/// TLS strain-dipole magnitude in eV → rad/ns per unit strain.
pub fn ev_to_rad_ns(d_ev: f64) -> f64 {
    d_ev * EV_RAD_NS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn temperature_round_trip_is_exact_to_12_digits() {
        for t in [0.003, 1.0, 20.0, 4000.0] {
            let back = rad_ns_to_mk(mk_to_rad_ns(t));
            assert!(((back - t) / t).abs() < 1e-12, "t={t} back={back}");
        }
    }

    #[test]
    fn frequency_helpers_carry_two_pi() {
        assert_eq!(ghz_to_rad_ns(1.0), 2.0 * PI);
        assert_eq!(mhz_to_rad_ns(1000.0), 2.0 * PI);
        assert_eq!(hz_to_rad_ns(1e9), 2.0 * PI);
        assert!((rad_ns_to_ghz(2.0 * PI) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn paper_parameter_conversions() {
        // T = 20 mK and the ensemble box corner eps_M/k_B = 4 K.
        assert!((mk_to_rad_ns(20.0) - 2.6174).abs() < 1e-12);
        assert!((kelvin_to_rad_ns(4.0) - 523.48).abs() < 1e-9);
        // J0 = 0.047 ps^2.
        assert!((ps2_to_ns2(0.047) - 4.7e-8).abs() < 1e-20);
    }
}
