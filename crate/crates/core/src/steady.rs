//! Exact steady states of the modulated ring and the second-order formulas
//! they reduce to.
//!
//! Current conservation forces `J = (n/m)[ħ∇S − qA/c]` to be the same at
//! every point, so the phase gradient is `ħ∇S = qA/c + mJ/n(θ)`. Averaging
//! that over the ring and imposing `∮∇S dx = 2πν` gives
//!
//! ```text
//! J = (ħν/R − qA/c) / (m ⟨1/n⟩)
//! ```
//!
//! which is exact for any modulation strength. Low-density regions dominate
//! `⟨1/n⟩` and suppress the current.

use std::f64::consts::PI;

use crate::averages::{compute_averages, RingAverages};
use crate::config::RingConfig;
use crate::error::Result;
use crate::profile::{periodic_mean, DensityProfile};

/// Solution of the constrained current equation for one winding number.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub winding: i64,
    /// Constant current `J` along the ring.
    pub current: f64,
    /// `ħ∇S(θᵢ)` on the profile grid.
    pub phase_gradient: Vec<f64>,
    /// Kinetic energy `E₀ = ∮ (n/2m)[ħ∇S − qA/c]² dx`.
    pub energy: f64,
    /// Total angular momentum `L_z = ∮ n R ħ∇S dx`.
    pub angular_momentum: f64,
}

impl SteadyState {
    /// Winding number recovered from the phase gradient by quadrature,
    /// `(1/2π)∮ ∇S dx`.
    pub fn circulation(&self, config: &RingConfig) -> f64 {
        periodic_mean(&self.phase_gradient) * config.perimeter() / (2.0 * PI * config.hbar)
    }

    /// Flat key/value record for tabular output.
    pub fn record(&self) -> [(&'static str, f64); 4] {
        [
            ("winding", self.winding as f64),
            ("current", self.current),
            ("energy", self.energy),
            ("angular_momentum", self.angular_momentum),
        ]
    }

    /// `(θᵢ, ħ∇S(θᵢ))` pairs.
    pub fn phase_table(&self) -> Vec<(f64, f64)> {
        let n = self.phase_gradient.len();
        self.phase_gradient
            .iter()
            .enumerate()
            .map(|(i, &g)| (crate::profile::theta(i, n), g))
            .collect()
    }
}

/// Solves for the steady state at winding `ν`.
pub fn solve_steady(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
) -> Result<SteadyState> {
    let averages = compute_averages(config, profile)?;
    let densities = profile.densities(config.base_density)?;
    Ok(steady_from_parts(config, &densities, &averages, winding))
}

pub(crate) fn exact_current(config: &RingConfig, averages: &RingAverages, winding: i64) -> f64 {
    config.momentum_mismatch(winding) / (config.mass * averages.inv_density_mean)
}

pub(crate) fn exact_energy(config: &RingConfig, averages: &RingAverages, winding: i64) -> f64 {
    let current = exact_current(config, averages, winding);
    0.5 * config.mass * current * current * config.perimeter() * averages.inv_density_mean
}

fn steady_from_parts(
    config: &RingConfig,
    densities: &[f64],
    averages: &RingAverages,
    winding: i64,
) -> SteadyState {
    let current = exact_current(config, averages, winding);
    let gauge = config.gauge_momentum();
    let phase_gradient: Vec<f64> = densities
        .iter()
        .map(|n| gauge + config.mass * current / n)
        .collect();
    let momentum_density: Vec<f64> = densities
        .iter()
        .zip(&phase_gradient)
        .map(|(n, g)| n * config.radius * g)
        .collect();
    SteadyState {
        winding,
        current,
        phase_gradient,
        energy: exact_energy(config, averages, winding),
        angular_momentum: config.perimeter() * periodic_mean(&momentum_density),
    }
}

/// Current of the unmodulated ring, `(n₀/m)(ħν/R − qA/c)`.
pub fn uniform_current(config: &RingConfig, winding: i64) -> f64 {
    config.base_density / config.mass * config.momentum_mismatch(winding)
}

/// `J ≈ (n₀/m)[1 − ⟨n₁²⟩/n₀²](ħν/R − qA/c)`.
pub fn perturbative_current(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
) -> Result<f64> {
    let averages = compute_averages(config, profile)?;
    let reduction = 1.0 - averages.relative_mean_square(config.base_density);
    Ok(uniform_current(config, winding) * reduction)
}

/// `E ≈ (N₀/2m)(ħν/R − qA/c)²[1 − ⟨n₁²⟩/n₀²]`.
pub fn perturbative_energy(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
) -> Result<f64> {
    let averages = compute_averages(config, profile)?;
    let reduction = 1.0 - averages.relative_mean_square(config.base_density);
    let mismatch = config.momentum_mismatch(winding);
    Ok(config.particle_number() / (2.0 * config.mass) * mismatch * mismatch * reduction)
}

/// `L_z ≈ N₀ R (qA/c) ⟨n₁²⟩/n₀²`, valid in the `ν = 0` state.
///
/// A uniform ring carries no angular momentum at `ν = 0`: the gauge term and
/// the diamagnetic current cancel exactly. The modulation spoils the
/// cancellation at second order.
pub fn angular_momentum_perturbative(
    config: &RingConfig,
    profile: &DensityProfile,
) -> Result<f64> {
    let averages = compute_averages(config, profile)?;
    Ok(config.particle_number()
        * config.radius
        * config.gauge_momentum()
        * averages.relative_mean_square(config.base_density))
}

/// Relative tolerance under which two winding energies count as degenerate.
const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Winding number of the lowest-energy steady state.
///
/// Searches `⌊a⌋ − 1 ..= ⌈a⌉ + 1` where `a` is the flux in flux quanta.
/// Degenerate energies resolve toward the smaller `|ν|`, then the smaller `ν`.
pub fn ground_state_winding(config: &RingConfig, profile: &DensityProfile) -> Result<i64> {
    let averages = compute_averages(config, profile)?;
    Ok(ground_state_winding_from(config, &averages))
}

pub(crate) fn ground_state_winding_from(config: &RingConfig, averages: &RingAverages) -> i64 {
    let flux = config.flux_quanta();
    let lo = flux.floor() as i64 - 1;
    let hi = flux.ceil() as i64 + 1;
    let mut best = (lo, exact_energy(config, averages, lo));
    for winding in lo + 1..=hi {
        let energy = exact_energy(config, averages, winding);
        let scale = energy.abs().max(best.1.abs());
        let degenerate = (energy - best.1).abs() <= DEGENERACY_TOLERANCE * scale;
        let preferred = (winding.abs(), winding) < (best.0.abs(), best.0);
        if (degenerate && preferred) || (!degenerate && energy < best.1) {
            best = (winding, energy);
        }
    }
    best.0
}
