//! Laboratory-frame energy of a charge density wave rotating at angular
//! velocity `Ω`.
//!
//! The current is conserved only in the frame co-rotating with the density
//! wave. There the problem is the static one with the vector potential
//! shifted to `A′ = A + mcΩR/q`:
//!
//! ```text
//! J′ = (n/m)[ħ∇S − qA′/c],    J = J′ + nΩR = (n/m)[ħ∇S − qA/c]
//! ```
//!
//! Bringing the energy back to the laboratory frame introduces the mirror
//! potential `A″ = A − mcΩR/q`:
//!
//! ```text
//! E(Ω) = ½ ∮ [ J′(ħ∇S − qA″/c) + n₀ m Ω² R² ] dx
//! ```
//!
//! Everything here is evaluated numerically on the profile grid and the
//! derivatives at `Ω = 0` are taken by finite differences, so the absence of a
//! linear term is measured rather than assumed.

use rayon::prelude::*;

use crate::averages::{compute_averages, RingAverages};
use crate::config::RingConfig;
use crate::error::{Error, Result};
use crate::finite_diff::{central_first, richardson_second};
use crate::profile::{periodic_mean, DensityProfile};

/// Step for the first-derivative check at `Ω = 0`.
pub const DERIVATIVE_STEP: f64 = 1e-4;

/// Base step of the Richardson-extrapolated stiffness stencil.
///
/// `E(Ω)` is quadratic at fixed winding, so the five-point stencil carries no
/// truncation error and the step only controls round-off, which scales as
/// `1/h²`.
pub const STIFFNESS_STEP: f64 = 0.1;

/// Number of points in the default `Ω` scan.
pub const SCAN_POINTS: usize = 41;

/// Half-width of the default `Ω` scan.
pub const SCAN_HALF_WIDTH: f64 = 0.2;

/// `(A′, A″) = (A + mcΩR/q, A − mcΩR/q)`.
pub fn rotating_potentials(config: &RingConfig, omega: f64) -> (f64, f64) {
    let shift = config.mass * config.light_speed * omega * config.radius / config.charge;
    (config.vector_potential + shift, config.vector_potential - shift)
}

/// Precomputed ring data for repeated evaluations at different `Ω`.
#[derive(Debug, Clone)]
pub struct LabFrame {
    config: RingConfig,
    densities: Vec<f64>,
    averages: RingAverages,
    winding: i64,
}

impl LabFrame {
    pub fn new(config: &RingConfig, profile: &DensityProfile, winding: i64) -> Result<Self> {
        let averages = compute_averages(config, profile)?;
        let densities = profile.densities(config.base_density)?;
        Ok(Self {
            config: *config,
            densities,
            averages,
            winding,
        })
    }

    pub fn averages(&self) -> &RingAverages {
        &self.averages
    }

    fn frame_config(&self, vector_potential: f64) -> RingConfig {
        self.config.with_vector_potential(vector_potential)
    }

    /// Constant current `J′` in the rotating frame.
    pub fn rotating_current(&self, omega: f64) -> f64 {
        let (a_prime, _) = rotating_potentials(&self.config, omega);
        let shifted = self.frame_config(a_prime);
        shifted.momentum_mismatch(self.winding) / (self.config.mass * self.averages.inv_density_mean)
    }

    /// `ħ∇S(θᵢ) = qA′/c + mJ′/n(θᵢ)`.
    pub fn phase_gradient(&self, omega: f64) -> Vec<f64> {
        let (a_prime, _) = rotating_potentials(&self.config, omega);
        let gauge = self.frame_config(a_prime).gauge_momentum();
        let current = self.rotating_current(omega);
        self.densities
            .iter()
            .map(|n| gauge + self.config.mass * current / n)
            .collect()
    }

    /// Laboratory-frame current `J′ + nΩR` at each grid point.
    pub fn lab_current(&self, omega: f64) -> Vec<f64> {
        let current = self.rotating_current(omega);
        self.densities
            .iter()
            .map(|n| current + n * omega * self.config.radius)
            .collect()
    }

    /// `E(Ω)` from the `J′`/`A″` integrand.
    pub fn energy(&self, omega: f64) -> f64 {
        let c = &self.config;
        let (_, a_second) = rotating_potentials(c, omega);
        let gauge_second = self.frame_config(a_second).gauge_momentum();
        let current = self.rotating_current(omega);
        let rigid = c.base_density * c.mass * (omega * c.radius).powi(2);
        let integrand: Vec<f64> = self
            .phase_gradient(omega)
            .iter()
            .map(|g| current * (g - gauge_second) + rigid)
            .collect();
        0.5 * c.perimeter() * periodic_mean(&integrand)
    }

    /// `E(Ω) = ∮ (n/2m)[ħ∇S − qA/c]² dx`, evaluated directly in the
    /// laboratory frame.
    pub fn energy_direct(&self, omega: f64) -> f64 {
        let c = &self.config;
        let gauge = c.gauge_momentum();
        let integrand: Vec<f64> = self
            .densities
            .iter()
            .zip(self.phase_gradient(omega))
            .map(|(n, g)| n / (2.0 * c.mass) * (g - gauge).powi(2))
            .collect();
        c.perimeter() * periodic_mean(&integrand)
    }

    /// `[E(+h) − E(−h)] / 2h`.
    pub fn derivative_at_zero(&self, step: f64) -> f64 {
        central_first(|w| self.energy(w), 0.0, step)
    }

    /// `d²E/dΩ²` at `Ω = 0`.
    pub fn stiffness(&self) -> f64 {
        richardson_second(|w| self.energy(w), 0.0, STIFFNESS_STEP)
    }
}

/// Laboratory-frame energy of the density wave rotating at `omega`.
pub fn energy_lab_frame(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
    omega: f64,
) -> Result<f64> {
    Ok(LabFrame::new(config, profile, winding)?.energy(omega))
}

/// Central difference of `E(Ω)` at zero.
pub fn rotation_derivative_check(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
    step: f64,
) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    Ok(LabFrame::new(config, profile, winding)?.derivative_at_zero(step))
}

/// Rotational stiffness `d²E/dΩ²|₀`, by Richardson-extrapolated finite
/// differences.
pub fn rotational_stiffness(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
) -> Result<f64> {
    Ok(LabFrame::new(config, profile, winding)?.stiffness())
}

/// Second-order stiffness `m N₀ R² ⟨n₁²⟩/n₀²`, twice the coefficient of `Ω²`
/// in the rotation cost `E₁`.
pub fn rotational_stiffness_perturbative(
    config: &RingConfig,
    profile: &DensityProfile,
) -> Result<f64> {
    let averages = compute_averages(config, profile)?;
    Ok(config.mass
        * config.particle_number()
        * config.radius
        * config.radius
        * averages.relative_mean_square(config.base_density))
}

/// `E(Ω)` samples together with the derivative diagnostics at `Ω = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationScan {
    pub omegas: Vec<f64>,
    pub energies: Vec<f64>,
    pub derivative_at_zero: f64,
    pub stiffness: f64,
}

/// `count` evenly spaced points on `[start, stop]`.
///
/// Points are placed symmetrically about the midpoint, so a grid centred on
/// zero contains exact `±Ω` pairs.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let mid = 0.5 * (start + stop);
            let half = 0.5 * (stop - start);
            let last = (count - 1) as f64;
            (0..count)
                .map(|i| match i {
                    0 => start,
                    i if i == count - 1 => stop,
                    _ => mid + half * ((2 * i) as f64 - last) / last,
                })
                .collect()
        }
    }
}

/// The default scan grid: 41 points on `[−0.2, 0.2]`.
pub fn default_omega_grid() -> Vec<f64> {
    linspace(-SCAN_HALF_WIDTH, SCAN_HALF_WIDTH, SCAN_POINTS)
}

pub fn rotation_scan(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
    omegas: &[f64],
) -> Result<RotationScan> {
    let frame = LabFrame::new(config, profile, winding)?;
    let energies = omegas.par_iter().map(|&w| frame.energy(w)).collect();
    Ok(RotationScan {
        omegas: omegas.to_vec(),
        energies,
        derivative_at_zero: frame.derivative_at_zero(DERIVATIVE_STEP),
        stiffness: frame.stiffness(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ring(flux: f64) -> RingConfig {
        RingConfig::default().with_flux_quanta(flux)
    }

    fn cosine(epsilon: f64) -> DensityProfile {
        DensityProfile::cosine(1.0, epsilon, 1, 1024).unwrap()
    }

    // Closed form for a single-cosine profile with n₀ = m = R = 1:
    // E(Ω) = π[(ν − A)² f + Ω²(1 − f)], f = √(1 − ε²)
    fn closed_form(flux: f64, winding: i64, epsilon: f64, omega: f64) -> f64 {
        let f = (1.0 - epsilon * epsilon).sqrt();
        PI * ((winding as f64 - flux).powi(2) * f + omega * omega * (1.0 - f))
    }

    #[test]
    fn potentials() {
        assert_eq!(rotating_potentials(&ring(0.3), 0.0), (0.3, 0.3));
        let (a1, a2) = rotating_potentials(&ring(0.3), 0.1);
        assert!((a1 - 0.4).abs() < 1e-15 && (a2 - 0.2).abs() < 1e-15);
        for omega in [0.05, -0.13, 0.2] {
            let (a1, a2) = rotating_potentials(&ring(0.3), omega);
            assert!((a1 * a2 - (0.09 - omega * omega)).abs() < 1e-15);
        }
    }

    #[test]
    fn static_limit_matches_steady_solver() {
        let e = energy_lab_frame(&ring(0.3), &cosine(0.2), 0, 0.0).unwrap();
        let steady = crate::steady::solve_steady(&ring(0.3), &cosine(0.2), 0).unwrap();
        assert!((e - steady.energy).abs() < 1e-14);
    }

    #[test]
    fn rotating_energy_matches_closed_form() {
        let e = energy_lab_frame(&ring(0.3), &cosine(0.2), 0, 0.1).unwrap();
        assert!((e - closed_form(0.3, 0, 0.2, 0.1)).abs() < 1e-12);
        assert!((e - 0.277_665_493_926_975_8).abs() < 1e-12);
        for winding in [-1, 1, 2] {
            let e = energy_lab_frame(&ring(0.3), &cosine(0.4), winding, -0.17).unwrap();
            assert!((e - closed_form(0.3, winding, 0.4, -0.17)).abs() < 1e-12);
        }
    }

    #[test]
    fn rotating_nothing_costs_nothing() {
        for omega in [0.0, 0.05, 0.2, -0.3] {
            let e = energy_lab_frame(&ring(0.3), &cosine(0.0), 0, omega).unwrap();
            assert!((e - PI * 0.09).abs() < 1e-14);
        }
    }

    #[test]
    fn both_energy_routes_agree() {
        let profile = DensityProfile::harmonics(1.0, &[(1, 0.2, 0.4), (2, 0.15, -1.0)], 512).unwrap();
        for winding in -1..=2 {
            let frame = LabFrame::new(&ring(0.41), &profile, winding).unwrap();
            for omega in [-0.2, -0.05, 0.0, 0.07, 0.2] {
                let a = frame.energy(omega);
                let b = frame.energy_direct(omega);
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn lab_current_equals_local_current_relation() {
        let config = ring(0.3);
        let profile = cosine(0.3);
        let frame = LabFrame::new(&config, &profile, 1).unwrap();
        let densities = profile.densities(1.0).unwrap();
        let omega = 0.13;
        let lab = frame.lab_current(omega);
        let gradient = frame.phase_gradient(omega);
        for ((j, n), g) in lab.iter().zip(&densities).zip(&gradient) {
            let local = n / config.mass * (g - config.gauge_momentum());
            assert!((j - local).abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_vanishes() {
        let d = rotation_derivative_check(&ring(0.3), &cosine(0.2), 0, 1e-4).unwrap();
        assert!(d.abs() < 1e-9);
        let d = rotation_derivative_check(&ring(0.0), &cosine(0.2), 0, 1e-4).unwrap();
        assert!(d.abs() < 1e-12);
        let d = rotation_derivative_check(&ring(0.3), &cosine(0.2), 1, 1e-4).unwrap();
        assert!(d.abs() < 1e-8);
        assert!(rotation_derivative_check(&ring(0.3), &cosine(0.2), 0, 0.0).is_err());
    }

    #[test]
    fn stiffness_examples() {
        let zero = rotational_stiffness(&ring(0.3), &cosine(0.0), 0).unwrap();
        assert!(zero.abs() < 1e-12, "{zero}");
        for epsilon in [0.2_f64, 0.5] {
            let exact = 2.0 * PI * (1.0 - (1.0 - epsilon * epsilon).sqrt());
            let pert = 2.0 * PI * epsilon * epsilon / 2.0;
            let s = rotational_stiffness(&ring(0.3), &cosine(epsilon), 0).unwrap();
            assert!((s - exact).abs() < 1e-10, "{s} vs {exact}");
            let p = rotational_stiffness_perturbative(&ring(0.3), &cosine(epsilon)).unwrap();
            assert!((p - pert).abs() < 1e-14);
            assert!(p < s);
        }
    }

    #[test]
    fn scan_is_even_and_sized() {
        let scan = rotation_scan(&ring(0.3), &cosine(0.2), 0, &default_omega_grid()).unwrap();
        assert_eq!(scan.omegas.len(), 41);
        assert_eq!(scan.energies.len(), 41);
        assert_eq!(scan.omegas[20], 0.0);
        for i in 0..41 {
            assert!((scan.energies[i] - scan.energies[40 - i]).abs() < 1e-10);
        }
        assert!(scan.derivative_at_zero.abs() < 1e-9);
        assert!((scan.stiffness - 2.0 * PI * (1.0 - 0.96_f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 2.0, 201)[200], 2.0);
        assert_eq!(linspace(0.0, 2.0, 201)[100], 1.0);
        assert_eq!(linspace(0.5, 3.0, 1), vec![0.5]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
        let grid = default_omega_grid();
        for i in 0..grid.len() {
            assert_eq!(grid[i], -grid[grid.len() - 1 - i]);
        }
    }
}
