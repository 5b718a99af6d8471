//! Two-level-system (TLS) noise models for superconducting qubits.
//!
//! This crate models an ensemble of charged two-level systems coupled to a
//! qubit, computes the statistics of the induced qubit depolarization and
//! dephasing, and simulates noise-engineering protocols that stabilize the
//! qubit lifetime (by dephasing TLSs with longitudinal noise) and extend the
//! qubit pure-dephasing time (by depolarizing TLSs with transverse noise).
//! A charge-basis transmon model bounds the spurious coupling of the applied
//! noise to the qubit itself.
//!
//! All internal quantities are angular frequencies in rad/ns with
//! ħ = k_B = 1; see [`units`] for conversions from laboratory units.
//!
//! Layout:
//!
//! - [`physcore`] — single-TLS physics: eigenstructure, phonon-bath rates,
//!   spectral densities, qubit rates induced by one TLS
//! - [`ensemble`] — joint parameter distribution, sampling, quadrature and
//!   Monte Carlo ensemble statistics, closed forms
//! - [`specdiff`] — spectral-diffusion (TLF-induced) temporal variance
//! - [`protocol`] — applied-noise engine and the lifetime-stabilization sweep
//! - [`lowfreq`] — low-frequency ensemble spectrum, 1/f structure, Ramsey
//!   decoherence envelope
//! - [`transmon`] — charge-basis diagonalization and spurious-coupling bounds
//! - [`cli`] — experiment runner reproducing the figure data as CSV

pub mod cli;
pub mod ensemble;
mod error;
pub mod lowfreq;
pub mod physcore;
pub mod protocol;
pub mod quad;
pub mod specdiff;
pub mod transmon;
pub mod units;

pub use error::{Error, Result};
