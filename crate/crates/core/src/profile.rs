//! Density modulations `n₁(θ)` sampled on a uniform periodic grid.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Smallest grid accepted by the constructors.
pub const MIN_GRID_SIZE: usize = 8;

/// Grid size used when none is specified.
pub const DEFAULT_GRID_SIZE: usize = 1024;

/// Tolerance on the periodic mean, relative to `n₀`.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// A zero-mean density modulation sampled at `θᵢ = 2πi/N`.
///
/// The profile stores `n₁` only. Positivity of the total density `n₀ + n₁`
/// is checked against the base density given at construction and again by
/// [`crate::averages::compute_averages`] against the ring configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    samples: Vec<f64>,
}

impl DensityProfile {
    /// The unmodulated ring.
    pub fn uniform(grid_size: usize) -> Result<Self> {
        check_grid(grid_size)?;
        Ok(Self {
            samples: vec![0.0; grid_size],
        })
    }

    /// `n₁(θ) = ε n₀ cos(kθ)`.
    pub fn cosine(
        base_density: f64,
        epsilon: f64,
        harmonic: usize,
        grid_size: usize,
    ) -> Result<Self> {
        if epsilon.is_nan() || epsilon.abs() >= 1.0 {
            return Err(Error::AmplitudeOutOfRange(epsilon));
        }
        if harmonic == 0 {
            return Err(Error::ZeroHarmonic);
        }
        check_grid(grid_size)?;
        if 2 * harmonic > grid_size {
            return Err(Error::HarmonicTooHigh {
                harmonic,
                grid_size,
            });
        }
        let amplitude = epsilon * base_density;
        let samples = (0..grid_size)
            .map(|i| amplitude * (harmonic as f64 * theta(i, grid_size)).cos())
            .collect();
        let profile = Self { samples };
        profile.check_mean(base_density)?;
        profile.check_positive(base_density)?;
        Ok(profile)
    }

    /// Builds a profile from arbitrary samples, removing their periodic mean.
    pub fn custom(samples: Vec<f64>, base_density: f64) -> Result<Self> {
        check_grid(samples.len())?;
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFiniteSample(index));
        }
        let mean = periodic_mean(&samples);
        let samples = samples.into_iter().map(|s| s - mean).collect();
        let profile = Self { samples };
        profile.check_mean(base_density)?;
        profile.check_positive(base_density)?;
        Ok(profile)
    }

    /// Sum of cosine harmonics `Σ aₖ cos(kθ + φₖ)`, given as `(k, aₖ, φₖ)`.
    pub fn harmonics(
        base_density: f64,
        terms: &[(usize, f64, f64)],
        grid_size: usize,
    ) -> Result<Self> {
        check_grid(grid_size)?;
        for &(k, _, _) in terms {
            if k == 0 {
                return Err(Error::ZeroHarmonic);
            }
            if 2 * k > grid_size {
                return Err(Error::HarmonicTooHigh {
                    harmonic: k,
                    grid_size,
                });
            }
        }
        let samples = (0..grid_size)
            .map(|i| {
                let t = theta(i, grid_size);
                terms
                    .iter()
                    .map(|&(k, a, phase)| a * (k as f64 * t + phase).cos())
                    .sum()
            })
            .collect();
        Self::custom(samples, base_density)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    /// Grid angles `θᵢ = 2πi/N`.
    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.samples.len();
        (0..n).map(move |i| theta(i, n))
    }

    /// Periodic mean `⟨n₁⟩`.
    pub fn mean(&self) -> f64 {
        periodic_mean(&self.samples)
    }

    pub fn is_uniform(&self) -> bool {
        self.samples.iter().all(|&s| s == 0.0)
    }

    /// Total densities `n₀ + n₁(θᵢ)`, failing if any is not positive.
    pub fn densities(&self, base_density: f64) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .enumerate()
            .map(|(index, &s)| {
                let density = base_density + s;
                if density > 0.0 {
                    Ok(density)
                } else {
                    Err(Error::DensityVanishes { index, density })
                }
            })
            .collect()
    }

    pub fn check_positive(&self, base_density: f64) -> Result<()> {
        self.densities(base_density).map(|_| ())
    }

    fn check_mean(&self, base_density: f64) -> Result<()> {
        let mean = self.mean();
        if mean.abs() > MEAN_TOLERANCE * base_density.abs() {
            return Err(Error::NonZeroMean { mean });
        }
        Ok(())
    }

    /// Parses the plain-text profile table.
    ///
    /// One sample per line; blank lines and `#` comments are skipped. An
    /// optional `# n1 profile N=<grid_size>` header fixes the expected count.
    /// The mean is removed on load.
    pub fn parse_table(text: &str, base_density: f64, origin: &Path) -> Result<Self> {
        let parse_error = |line: usize, message: String| Error::ProfileParse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut declared = None;
        let mut samples = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(n) = comment.trim().strip_prefix("n1 profile N=") {
                    let n = n
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| parse_error(idx + 1, format!("bad header: {e}")))?;
                    declared = Some(n);
                }
                continue;
            }
            let value = line
                .parse::<f64>()
                .map_err(|e| parse_error(idx + 1, format!("bad sample {line:?}: {e}")))?;
            samples.push(value);
        }
        if let Some(n) = declared {
            if n != samples.len() {
                return Err(parse_error(
                    0,
                    format!("header declares N={n} but {} samples follow", samples.len()),
                ));
            }
        }
        Self::custom(samples, base_density)
    }

    pub fn read_table(path: &Path, base_density: f64) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_table(&text, base_density, path)
    }

    /// Renders the profile table with its header, using shortest round-trip
    /// formatting for the samples.
    pub fn to_table(&self) -> String {
        let mut out = format!("# n1 profile N={}\n", self.grid_size());
        for s in &self.samples {
            writeln!(out, "{s:?}").unwrap();
        }
        out
    }
}

pub(crate) fn theta(i: usize, grid_size: usize) -> f64 {
    2.0 * PI * i as f64 / grid_size as f64
}

/// Periodic trapezoid rule on a uniform grid, normalised by the period.
pub(crate) fn periodic_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn check_grid(grid_size: usize) -> Result<()> {
    if grid_size < MIN_GRID_SIZE {
        return Err(Error::GridTooSmall {
            min: MIN_GRID_SIZE,
            got: grid_size,
        });
    }
    Ok(())
}
