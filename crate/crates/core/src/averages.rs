//! The two ring averages every solver consumes.

use crate::config::RingConfig;
use crate::error::Result;
use crate::profile::{periodic_mean, DensityProfile};

/// Ring averages of a density profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingAverages {
    /// `⟨1/n⟩ = (1/L)∮ dx/(n₀ + n₁)`, unnormalised (it carries units of `1/n`).
    pub inv_density_mean: f64,
    /// `⟨n₁²⟩ = (1/L)∮ n₁² dx`.
    pub modulation_mean_square: f64,
}

impl RingAverages {
    /// Relative modulation strength `⟨n₁²⟩/n₀²`, the small parameter of the
    /// perturbative formulas.
    pub fn relative_mean_square(&self, base_density: f64) -> f64 {
        self.modulation_mean_square / (base_density * base_density)
    }
}

/// Computes `⟨1/n⟩` and `⟨n₁²⟩` with the periodic trapezoid rule.
///
/// On a uniform periodic grid the trapezoid rule is the plain sample mean and
/// converges geometrically for smooth profiles.
pub fn compute_averages(config: &RingConfig, profile: &DensityProfile) -> Result<RingAverages> {
    config.validate()?;
    let densities = profile.densities(config.base_density)?;
    let inverse: Vec<f64> = densities.iter().map(|n| 1.0 / n).collect();
    let squares: Vec<f64> = profile.samples().iter().map(|s| s * s).collect();
    Ok(RingAverages {
        inv_density_mean: periodic_mean(&inverse),
        modulation_mean_square: periodic_mean(&squares),
    })
}
