//! Landau free energy of the density wave with the diamagnetic energy gain
//! folded in.
//!
//! The bare expansion is `E_CDW = −α n₁² + β n₁⁴`. A modulation of amplitude
//! `n₁` with mean square `⟨n₁²⟩ = s n₁²` lowers the kinetic energy of the
//! persistent current by `(N₀/2m)(ħν/R − qA/c)² s n₁²/n₀²` at leading order,
//! which adds to `α`:
//!
//! ```text
//! α_eff = α + s (N₀/2m)(ħν/R − qA/c)² / n₀²
//! ```
//!
//! A threading flux can therefore push a stable uniform ring (`α < 0`) into
//! the modulated phase.

use rayon::prelude::*;

use crate::averages::compute_averages;
use crate::config::RingConfig;
use crate::error::{Error, Result};
use crate::profile::{DensityProfile, DEFAULT_GRID_SIZE};
use crate::steady::{exact_energy, ground_state_winding_from, perturbative_energy};

/// Mean-square shape factor of a single cosine, `⟨cos²⟩ = 1/2`.
pub const COSINE_SHAPE_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauParams {
    pub alpha: f64,
    pub beta: f64,
    /// `s = ⟨n₁²⟩ / amplitude²` for the profile shape.
    pub shape_factor: f64,
}

impl LandauParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        Self::with_shape_factor(alpha, beta, COSINE_SHAPE_FACTOR)
    }

    pub fn with_shape_factor(alpha: f64, beta: f64, shape_factor: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::NonPositiveQuartic(beta));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidConfig(format!("alpha must be finite, got {alpha}")));
        }
        if !(shape_factor.is_finite() && shape_factor > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "shape factor must be positive, got {shape_factor}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            shape_factor,
        })
    }

    /// `−α a² + β a⁴`.
    pub fn free_energy(&self, amplitude: f64) -> f64 {
        let a2 = amplitude * amplitude;
        -self.alpha * a2 + self.beta * a2 * a2
    }
}

/// Quadratic coefficient including the diamagnetic energy gain.
pub fn effective_alpha(config: &RingConfig, params: &LandauParams, winding: i64) -> f64 {
    let mismatch = config.momentum_mismatch(winding);
    let n0 = config.base_density;
    params.alpha
        + params.shape_factor * config.particle_number() / (2.0 * config.mass) * mismatch * mismatch
            / (n0 * n0)
}

/// Equilibrium modulation amplitude and whether it stays inside the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub value: f64,
    /// `false` once the amplitude reaches `n₀`: the density would touch zero
    /// and the Landau expansion no longer describes the ring.
    pub valid: bool,
}

/// Minimiser of `−α a² + β a⁴`: `a² = α/(2β)` when `α > 0`, else zero.
pub fn equilibrium_amplitude(alpha: f64, beta: f64, base_density: f64) -> Result<Amplitude> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::NonPositiveQuartic(beta));
    }
    let value = (alpha.max(0.0) / (2.0 * beta)).sqrt();
    Ok(Amplitude {
        value,
        valid: value < base_density,
    })
}

/// One row of [`instability_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauRow {
    /// Flux in flux quanta.
    pub flux: f64,
    pub winding: i64,
    pub alpha_eff: f64,
    pub amplitude: f64,
    pub valid: bool,
    /// Kinetic energy of the modulated ring plus `E_CDW`.
    pub energy_total: f64,
}

/// Evaluates the field-induced instability across a flux grid.
///
/// Each point takes the ground-state winding, the effective coefficient, the
/// equilibrium amplitude of a cosine of the given harmonic, and the combined
/// energy `E₀(n₁*) + E_CDW(n₁*)`. When the amplitude leaves the model the
/// kinetic part falls back to the second-order formula.
pub fn instability_sweep(
    config: &RingConfig,
    params: &LandauParams,
    flux_grid: &[f64],
    harmonic: usize,
    grid_size: usize,
) -> Result<Vec<LandauRow>> {
    config.validate()?;
    if let Some(bad) = flux_grid.iter().find(|f| !f.is_finite()) {
        return Err(Error::InvalidConfig(format!("flux grid contains {bad}")));
    }
    let uniform = DensityProfile::uniform(grid_size)?;
    let uniform_avg = compute_averages(config, &uniform)?;
    flux_grid
        .par_iter()
        .map(|&flux| {
            let ring = config.with_flux_quanta(flux);
            let winding = ground_state_winding_from(&ring, &uniform_avg);
            let alpha_eff = effective_alpha(&ring, params, winding);
            let amplitude = equilibrium_amplitude(alpha_eff, params.beta, ring.base_density)?;
            let kinetic = if amplitude.valid {
                let profile = DensityProfile::cosine(
                    ring.base_density,
                    amplitude.value / ring.base_density,
                    harmonic,
                    grid_size,
                )?;
                exact_energy(&ring, &compute_averages(&ring, &profile)?, winding)
            } else {
                let profile = DensityProfile::uniform(grid_size)?;
                let uniform_energy = perturbative_energy(&ring, &profile, winding)?;
                let relative = params.shape_factor * amplitude.value.powi(2)
                    / ring.base_density.powi(2);
                uniform_energy * (1.0 - relative)
            };
            Ok(LandauRow {
                flux,
                winding,
                alpha_eff,
                amplitude: amplitude.value,
                valid: amplitude.valid,
                energy_total: kinetic + params.free_energy(amplitude.value),
            })
        })
        .collect()
}

/// Fixed point of the amplitude/coefficient loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistent {
    pub amplitude: f64,
    /// `α` plus the exact kinetic-energy gain per unit `amplitude²`.
    pub alpha_eff: f64,
    pub iterations: usize,
}

/// Iterates amplitude → exact kinetic-energy gain → refitted quadratic
/// coefficient → amplitude, for a cosine profile of the given harmonic.
///
/// The loop starts from the leading-order amplitude. It stops when successive
/// amplitudes differ by at most `tolerance`; failing that within
/// `max_iterations`, it returns [`Error::NonConvergence`].
pub fn self_consistent_amplitude(
    config: &RingConfig,
    params: &LandauParams,
    winding: i64,
    harmonic: usize,
    tolerance: f64,
    max_iterations: usize,
) -> Result<SelfConsistent> {
    let n0 = config.base_density;
    let grid_size = DEFAULT_GRID_SIZE;
    let uniform_energy = exact_energy(
        config,
        &compute_averages(config, &DensityProfile::uniform(grid_size)?)?,
        winding,
    );
    let leading = effective_alpha(
        config,
        &LandauParams {
            shape_factor: COSINE_SHAPE_FACTOR,
            ..*params
        },
        winding,
    );
    let mut alpha_eff = leading;
    let mut amplitude = equilibrium_amplitude(alpha_eff, params.beta, n0)?.value;
    for iteration in 1..=max_iterations {
        if amplitude == 0.0 {
            return Ok(SelfConsistent {
                amplitude,
                alpha_eff,
                iterations: iteration - 1,
            });
        }
        if amplitude >= n0 {
            return Err(Error::AmplitudeOutOfRange(amplitude / n0));
        }
        let profile = DensityProfile::cosine(n0, amplitude / n0, harmonic, grid_size)?;
        let energy = exact_energy(config, &compute_averages(config, &profile)?, winding);
        alpha_eff = params.alpha + (uniform_energy - energy) / (amplitude * amplitude);
        let next = equilibrium_amplitude(alpha_eff, params.beta, n0)?.value;
        let change = (next - amplitude).abs();
        amplitude = next;
        if change <= tolerance {
            return Ok(SelfConsistent {
                amplitude,
                alpha_eff,
                iterations: iteration,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
        residual: f64::NAN,
        constraint: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ring(flux: f64) -> RingConfig {
        RingConfig::default().with_flux_quanta(flux)
    }

    #[test]
    fn no_flux_no_shift() {
        let params = LandauParams::new(-0.1, 0.5).unwrap();
        assert_eq!(effective_alpha(&ring(0.0), &params, 0), -0.1);
    }

    #[test]
    fn flux_shifts_alpha() {
        let params = LandauParams::new(0.2, 0.5).unwrap();
        let shifted = effective_alpha(&ring(0.3), &params, 0);
        assert!((shifted - (0.2 + 0.5 * PI * 0.09)).abs() < 1e-15);
        assert!((shifted - 0.2 - 0.141_371_669_411_540_7).abs() < 1e-12);
        let excited = effective_alpha(&ring(0.3), &params, 1);
        assert!((excited - (0.2 + 0.5 * PI * 0.49)).abs() < 1e-14);
    }

    #[test]
    fn amplitude_examples() {
        let a = equilibrium_amplitude(0.1, 0.5, 1.0).unwrap();
        assert!((a.value - 0.1_f64.sqrt()).abs() < 1e-15 && a.valid);
        assert_eq!(equilibrium_amplitude(-0.3, 0.5, 1.0).unwrap().value, 0.0);
        assert_eq!(equilibrium_amplitude(0.0, 0.5, 1.0).unwrap().value, 0.0);
        let edge = equilibrium_amplitude(1.0, 0.5, 1.0).unwrap();
        assert_eq!(edge.value, 1.0);
        assert!(!edge.valid);
        assert!(equilibrium_amplitude(0.1, 0.0, 1.0).is_err());
        assert!(LandauParams::new(0.1, -1.0).is_err());
    }

    #[test]
    fn field_induced_modulation() {
        let params = LandauParams::new(-0.1, 0.5).unwrap();
        let rows = instability_sweep(&ring(0.0), &params, &[0.0, 0.3], 1, 1024).unwrap();
        assert_eq!(rows[0].amplitude, 0.0);
        assert_eq!(rows[1].winding, 0);
        assert!((rows[1].alpha_eff - 0.041_371_669_411_540_7).abs() < 1e-12);
        assert!((rows[1].amplitude - 0.203_400_268_956_411_9).abs() < 1e-12);
        assert!(rows[1].valid);
        // modulated phase lies below the uniform one
        assert!(rows[1].energy_total < PI * 0.09);
    }

    #[test]
    fn sweep_with_stable_alpha_stays_uniform() {
        let params = LandauParams::new(-1.0, 0.5).unwrap();
        let rows = instability_sweep(&ring(0.0), &params, &[0.0, 0.2, 0.5], 1, 256).unwrap();
        assert!(rows.iter().all(|r| r.amplitude == 0.0));
    }

    #[test]
    fn out_of_model_amplitude_is_flagged() {
        let params = LandauParams::new(1.5, 0.5).unwrap();
        let rows = instability_sweep(&ring(0.0), &params, &[0.3], 1, 256).unwrap();
        assert!(!rows[0].valid);
        assert!(rows[0].energy_total.is_finite());
    }

    #[test]
    fn self_consistent_loop_converges() {
        let params = LandauParams::new(-0.05, 0.5).unwrap();
        let result = self_consistent_amplitude(&ring(0.3), &params, 0, 1, 1e-12, 50).unwrap();
        assert!(result.iterations <= 50);
        assert!(result.amplitude > 0.0 && result.amplitude <= 0.5);
        // the exact gain per amplitude² exceeds the leading-order one
        let leading = effective_alpha(&ring(0.3), &params, 0);
        assert!(result.alpha_eff > leading);

        let stable = LandauParams::new(-1.0, 0.5).unwrap();
        let zero = self_consistent_amplitude(&ring(0.3), &stable, 0, 1, 1e-12, 50).unwrap();
        assert_eq!(zero.amplitude, 0.0);
        assert_eq!(zero.iterations, 0);
    }
}
