//! Persistent currents in a superfluid ring that carries a charge density
//! wave.
//!
//! A ring of radius `R` threaded by a vector potential `A` holds a
//! condensate of density `n₀ + n₁(θ)`. This crate solves the steady current
//! exactly for any winding number, compares the result with the second-order
//! formulas in `⟨n₁²⟩/n₀²`, evaluates the laboratory-frame energy of a
//! rotating density wave, and checks numerically that `E(Ω)` has no term
//! linear in `Ω`: the diamagnetic current does not set the modulation
//! spinning.
//!
//! ```
//! use cdw_ring::{solve_steady, DensityProfile, RingConfig};
//!
//! let ring = RingConfig::default().with_flux_quanta(0.3);
//! let profile = DensityProfile::cosine(1.0, 0.2, 1, 1024)?;
//! let state = solve_steady(&ring, &profile, 0)?;
//! assert!((state.current + 0.3 * 0.96_f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), cdw_ring::Error>(())
//! ```
//!
//! The `book/` directory next to the crate has the longer walkthrough; its
//! code listings are compiled as doc-tests of this crate.

pub mod averages;
pub mod config;
pub mod error;
pub mod finite_diff;
pub mod landau;
pub mod oracle;
pub mod profile;
pub mod random;
pub mod rotating;
pub mod steady;
pub mod sweep;

pub use averages::{compute_averages, RingAverages};
pub use config::RingConfig;
pub use error::{Error, Result};
pub use landau::{
    effective_alpha, equilibrium_amplitude, instability_sweep, self_consistent_amplitude,
    Amplitude, LandauParams, LandauRow,
};
pub use oracle::{
    minimize_phase_energy, minimize_phase_energy_with, oracle_compare, OracleMethod,
    OracleReport, OracleResult, OracleSettings,
};
pub use profile::DensityProfile;
pub use rotating::{
    energy_lab_frame, linspace, rotating_potentials, rotation_derivative_check, rotation_scan,
    rotational_stiffness, rotational_stiffness_perturbative, LabFrame, RotationScan,
};
pub use steady::{
    angular_momentum_perturbative, ground_state_winding, perturbative_current,
    perturbative_energy, solve_steady, SteadyState,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/units-and-profiles.md")]
    mod units_and_profiles {}
    #[doc = include_str!("../../../book/src/persistent-current.md")]
    mod persistent_current {}
    #[doc = include_str!("../../../book/src/rotating-frame.md")]
    mod rotating_frame {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/landau.md")]
    mod landau {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
