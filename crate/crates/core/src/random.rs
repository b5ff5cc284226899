//! Seeded random rings for certificate runs and property checks.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RingConfig;
use crate::error::Result;
use crate::profile::DensityProfile;

/// Highest harmonic index drawn for random profiles.
pub const MAX_HARMONIC_INDEX: usize = 8;

/// Sampling bounds for random cases.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseBounds {
    /// Flux drawn uniformly from `[−max_flux, max_flux]`, in flux quanta.
    pub max_flux: f64,
    /// Total amplitude `Σ|aₖ|/n₀` drawn uniformly from `[0, max_epsilon]`.
    pub max_epsilon: f64,
    pub max_harmonics: usize,
    pub windings: Vec<i64>,
    pub grid_size: usize,
}

impl Default for CaseBounds {
    fn default() -> Self {
        Self {
            max_flux: 0.5,
            max_epsilon: 0.4,
            max_harmonics: 5,
            windings: vec![-1, 0, 1],
            grid_size: crate::profile::DEFAULT_GRID_SIZE,
        }
    }
}

/// A random ring together with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct RandomCase {
    pub config: RingConfig,
    pub flux: f64,
    pub winding: i64,
    pub epsilon: f64,
    /// `(k, aₖ, φₖ)` cosine terms.
    pub terms: Vec<(usize, f64, f64)>,
    pub profile: DensityProfile,
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random multi-harmonic profile whose density stays above `n₀(1 − ε)`.
pub fn random_terms<R: Rng>(
    rng: &mut R,
    base_density: f64,
    epsilon: f64,
    max_harmonics: usize,
) -> Vec<(usize, f64, f64)> {
    let count = rng.gen_range(1..=max_harmonics.clamp(1, MAX_HARMONIC_INDEX));
    let mut indices: Vec<usize> = (1..=MAX_HARMONIC_INDEX).collect();
    indices.shuffle(rng);
    indices.truncate(count);
    indices.sort_unstable();
    let weights: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    indices
        .into_iter()
        .zip(weights)
        .map(|(k, w)| {
            let phase = rng.gen_range(0.0..2.0 * PI);
            (k, epsilon * base_density * w / total, phase)
        })
        .collect()
}

pub fn random_case<R: Rng>(rng: &mut R, base: &RingConfig, bounds: &CaseBounds) -> Result<RandomCase> {
    let flux = rng.gen_range(-bounds.max_flux..=bounds.max_flux);
    let winding = *bounds.windings.choose(rng).unwrap_or(&0);
    let epsilon = rng.gen_range(0.0..=bounds.max_epsilon);
    let terms = random_terms(rng, base.base_density, epsilon, bounds.max_harmonics);
    let profile = DensityProfile::harmonics(base.base_density, &terms, bounds.grid_size)?;
    Ok(RandomCase {
        config: base.with_flux_quanta(flux),
        flux,
        winding,
        epsilon,
        terms,
        profile,
    })
}

/// `count` cases drawn from one seeded stream.
pub fn random_cases(seed: u64, count: usize, base: &RingConfig, bounds: &CaseBounds) -> Result<Vec<RandomCase>> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| random_case(&mut rng, base, bounds)).collect()
}
