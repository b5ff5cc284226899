//! Brute-force check of the steady-state solver.
//!
//! The discretised kinetic energy
//!
//! ```text
//! F(g) = Σᵢ (L/N) n(θᵢ)/(2m) (gᵢ − qA/c)²
//! ```
//!
//! is minimised over phase-gradient samples `gᵢ` subject to the winding
//! constraint `(1/N) Σᵢ gᵢ = ħν/R`. The default path is projected gradient
//! descent, which never forms `⟨1/n⟩`; an exact elimination of the single
//! multiplier is available for comparison. Stationarity gives
//! `n(θᵢ)(gᵢ − qA/c) = λ` at every point, so the multiplier is `λ = mJ` and a
//! converged run demonstrates current conservation independently.

use crate::config::RingConfig;
use crate::error::{Error, Result};
use crate::profile::{periodic_mean, DensityProfile};
use crate::steady::solve_steady;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 100_000;

/// Default agreement threshold for [`oracle_compare`].
pub const DEFAULT_GAP_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    /// Closed-form elimination of the multiplier for the diagonal quadratic.
    Kkt,
    /// Fixed-step gradient descent projected onto the winding constraint.
    ProjectedDescent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub method: OracleMethod,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            method: OracleMethod::ProjectedDescent,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Minimising phase gradient `gᵢ ≈ ħ∇S(θᵢ)`.
    pub minimizer: Vec<f64>,
    /// Multiplier of the winding constraint, identified with `mJ`.
    pub lagrange_multiplier: f64,
    pub energy: f64,
    pub iterations: usize,
    /// `maxᵢ |n(θᵢ)(gᵢ − qA/c) − λ|`.
    pub residual: f64,
    /// `|(1/N)Σ gᵢ − ħν/R|`.
    pub constraint_residual: f64,
}

impl OracleResult {
    pub fn current(&self, config: &RingConfig) -> f64 {
        self.lagrange_multiplier / config.mass
    }
}

struct Problem {
    densities: Vec<f64>,
    gauge: f64,
    target_mean: f64,
    cell: f64,
    mass: f64,
}

impl Problem {
    fn new(config: &RingConfig, profile: &DensityProfile, winding: i64) -> Result<Self> {
        config.validate()?;
        let densities = profile.densities(config.base_density)?;
        Ok(Self {
            cell: config.perimeter() / densities.len() as f64,
            densities,
            gauge: config.gauge_momentum(),
            target_mean: config.hbar * winding as f64 / config.radius,
            mass: config.mass,
        })
    }

    fn energy(&self, g: &[f64]) -> f64 {
        self.densities
            .iter()
            .zip(g)
            .map(|(n, g)| self.cell * n / (2.0 * self.mass) * (g - self.gauge).powi(2))
            .sum()
    }

    /// Local currents times `m`: `n(θᵢ)(gᵢ − qA/c)`.
    fn local_momenta(&self, g: &[f64]) -> Vec<f64> {
        self.densities
            .iter()
            .zip(g)
            .map(|(n, g)| n * (g - self.gauge))
            .collect()
    }

    fn project(&self, g: &mut [f64]) {
        let shift = self.target_mean - periodic_mean(g);
        g.iter_mut().for_each(|x| *x += shift);
    }

    fn finish(&self, minimizer: Vec<f64>, iterations: usize) -> OracleResult {
        let momenta = self.local_momenta(&minimizer);
        let multiplier = periodic_mean(&momenta);
        let residual = momenta
            .iter()
            .map(|p| (p - multiplier).abs())
            .fold(0.0, f64::max);
        OracleResult {
            energy: self.energy(&minimizer),
            constraint_residual: (periodic_mean(&minimizer) - self.target_mean).abs(),
            minimizer,
            lagrange_multiplier: multiplier,
            iterations,
            residual,
        }
    }

    fn solve_kkt(&self) -> OracleResult {
        // gᵢ = qA/c + λ/nᵢ with λ fixed by the constraint
        let inverse_mean = periodic_mean(&self.densities.iter().map(|n| 1.0 / n).collect::<Vec<_>>());
        let multiplier = (self.target_mean - self.gauge) / inverse_mean;
        let minimizer = self
            .densities
            .iter()
            .map(|n| self.gauge + multiplier / n)
            .collect();
        self.finish(minimizer, 0)
    }

    fn solve_descent(&self, settings: &OracleSettings, initial: Option<&[f64]>) -> Result<OracleResult> {
        let mut g = match initial {
            Some(start) => start.to_vec(),
            None => vec![self.target_mean; self.densities.len()],
        };
        self.project(&mut g);

        // Hessian is diag(cell·nᵢ/m); the optimal fixed step for a spectrum in
        // [h_min, h_max] is 2/(h_min + h_max).
        let (n_min, n_max) = self
            .densities
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &n| (lo.min(n), hi.max(n)));
        let step = 2.0 * self.mass / (self.cell * (n_min + n_max));

        let scale = |multiplier: f64| settings.tolerance * multiplier.abs().max(1.0);
        let mut iterations = 0;
        loop {
            let momenta = self.local_momenta(&g);
            let multiplier = periodic_mean(&momenta);
            let residual = momenta
                .iter()
                .map(|p| (p - multiplier).abs())
                .fold(0.0, f64::max);
            if residual <= scale(multiplier) {
                return Ok(self.finish(g, iterations));
            }
            if iterations >= settings.max_iterations {
                return Err(Error::NonConvergence {
                    iterations,
                    residual,
                    constraint: (periodic_mean(&g) - self.target_mean).abs(),
                });
            }
            // projected gradient: subtracting the mean keeps Σgᵢ fixed
            let factor = step * self.cell / self.mass;
            for (x, p) in g.iter_mut().zip(&momenta) {
                *x -= factor * (p - multiplier);
            }
            self.project(&mut g);
            iterations += 1;
        }
    }
}

/// Minimises the discretised energy with projected descent.
pub fn minimize_phase_energy(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
    tolerance: f64,
) -> Result<OracleResult> {
    let settings = OracleSettings {
        tolerance,
        ..OracleSettings::default()
    };
    minimize_phase_energy_with(config, profile, winding, &settings, None)
}

/// Minimises the discretised energy with explicit settings and an optional
/// starting point (projected onto the constraint before use).
pub fn minimize_phase_energy_with(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
    settings: &OracleSettings,
    initial: Option<&[f64]>,
) -> Result<OracleResult> {
    if !(settings.tolerance.is_finite() && settings.tolerance > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "oracle tolerance must be positive, got {}",
            settings.tolerance
        )));
    }
    let problem = Problem::new(config, profile, winding)?;
    if let Some(start) = initial {
        if start.len() != problem.densities.len() {
            return Err(Error::InvalidConfig(format!(
                "initial guess has {} samples, grid has {}",
                start.len(),
                problem.densities.len()
            )));
        }
    }
    match settings.method {
        OracleMethod::Kkt => Ok(problem.solve_kkt()),
        OracleMethod::ProjectedDescent => problem.solve_descent(settings, initial),
    }
}

/// Relative gaps between the steady-state solver and the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub winding: i64,
    pub current_gap: f64,
    pub energy_gap: f64,
    /// `maxᵢ |Δgᵢ| / maxᵢ |gᵢ|`.
    pub gradient_gap: f64,
    pub iterations: usize,
}

impl OracleReport {
    pub fn max_gap(&self) -> f64 {
        self.current_gap.max(self.energy_gap).max(self.gradient_gap)
    }

    pub fn within(&self, threshold: f64) -> bool {
        self.max_gap() <= threshold
    }

    /// Fails with a structured message when any gap exceeds `threshold`.
    pub fn ensure(&self, threshold: f64) -> Result<()> {
        if self.within(threshold) {
            Ok(())
        } else {
            Err(Error::OracleMismatch(self.to_record(threshold)))
        }
    }

    /// One-line JSON record of the comparison.
    pub fn to_record(&self, threshold: f64) -> String {
        serde_json::json!({
            "winding": self.winding,
            "current_gap": self.current_gap,
            "energy_gap": self.energy_gap,
            "gradient_gap": self.gradient_gap,
            "iterations": self.iterations,
            "threshold": threshold,
            "passed": self.within(threshold),
        })
        .to_string()
    }
}

/// `|a − b| / max(|a|, |b|)`, falling back to an absolute gap below machine
/// epsilon.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::EPSILON)
}

/// Runs the exact solver and the projected-descent oracle and reports their
/// relative disagreement in current, energy and pointwise phase gradient.
pub fn oracle_compare(
    config: &RingConfig,
    profile: &DensityProfile,
    winding: i64,
) -> Result<OracleReport> {
    let exact = solve_steady(config, profile, winding)?;
    let oracle = minimize_phase_energy_with(config, profile, winding, &OracleSettings::default(), None)?;
    let scale = exact
        .phase_gradient
        .iter()
        .chain(&oracle.minimizer)
        .fold(f64::EPSILON, |m, g| m.max(g.abs()));
    let gradient_gap = exact
        .phase_gradient
        .iter()
        .zip(&oracle.minimizer)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    Ok(OracleReport {
        winding,
        current_gap: relative_gap(exact.current, oracle.current(config)),
        energy_gap: relative_gap(exact.energy, oracle.energy),
        gradient_gap,
        iterations: oracle.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ring(flux: f64) -> RingConfig {
        RingConfig::default().with_flux_quanta(flux)
    }

    fn cosine(epsilon: f64, grid: usize) -> DensityProfile {
        DensityProfile::cosine(1.0, epsilon, 1, grid).unwrap()
    }

    #[test]
    fn uniform_ring_minimizer_is_flat() {
        let result = minimize_phase_energy(&ring(0.3), &DensityProfile::uniform(64).unwrap(), 0, 1e-12).unwrap();
        assert!(result.minimizer.iter().all(|g| g.abs() < 1e-15));
        assert!((result.energy - PI * 0.09).abs() < 1e-9);
        assert!((result.current(&ring(0.3)) + 0.3).abs() < 1e-12);
    }

    #[test]
    fn modulated_ring_minimum() {
        let f = 0.96_f64.sqrt();
        let result = minimize_phase_energy(&ring(0.3), &cosine(0.2, 1024), 0, 1e-12).unwrap();
        assert!((result.current(&ring(0.3)) + 0.3 * f).abs() < 1e-8);
        assert!((result.energy - PI * 0.09 * f).abs() < 1e-9);
        assert!(result.constraint_residual < 1e-10);

        let excited = minimize_phase_energy(&ring(0.3), &cosine(0.2, 1024), 1, 1e-12).unwrap();
        assert!((excited.energy - PI * 0.49 * f).abs() < 1e-9);
    }

    #[test]
    fn kkt_path_agrees_with_descent() {
        let profile = DensityProfile::harmonics(1.0, &[(1, 0.2, 0.1), (4, 0.1, 2.0)], 256).unwrap();
        let kkt = minimize_phase_energy_with(
            &ring(0.45),
            &profile,
            -1,
            &OracleSettings { method: OracleMethod::Kkt, ..OracleSettings::default() },
            None,
        )
        .unwrap();
        let descent = minimize_phase_energy(&ring(0.45), &profile, -1, 1e-12).unwrap();
        assert!(relative_gap(kkt.lagrange_multiplier, descent.lagrange_multiplier) < 1e-10);
        assert!(kkt.residual < 1e-14);
    }

    #[test]
    fn stationarity_means_constant_current() {
        let config = ring(0.3);
        let profile = cosine(0.5, 512);
        let result = minimize_phase_energy(&config, &profile, 0, 1e-12).unwrap();
        let densities = profile.densities(1.0).unwrap();
        let currents: Vec<f64> = densities
            .iter()
            .zip(&result.minimizer)
            .map(|(n, g)| n * (g - config.gauge_momentum()) / config.mass)
            .collect();
        let first = currents[0];
        assert!(currents.iter().all(|j| (j - first).abs() < 1e-11));
    }

    #[test]
    fn iteration_cap_reports_residuals() {
        let settings = OracleSettings { max_iterations: 3, ..OracleSettings::default() };
        let err = minimize_phase_energy_with(&ring(0.3), &cosine(0.9, 256), 0, &settings, None).unwrap_err();
        match err {
            Error::NonConvergence { iterations, residual, .. } => {
                assert_eq!(iterations, 3);
                assert!(residual > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tolerance_and_initial_length() {
        assert!(minimize_phase_energy(&ring(0.3), &cosine(0.2, 64), 0, 0.0).is_err());
        let settings = OracleSettings::default();
        assert!(minimize_phase_energy_with(&ring(0.3), &cosine(0.2, 64), 0, &settings, Some(&[0.0; 3])).is_err());
    }

    #[test]
    fn compare_examples() {
        let uniform = oracle_compare(&ring(0.3), &DensityProfile::uniform(128).unwrap(), 0).unwrap();
        assert!(uniform.within(1e-12), "{uniform:?}");
        let modulated = oracle_compare(&ring(0.3), &cosine(0.2, 1024), 0).unwrap();
        modulated.ensure(1e-8).unwrap();
        let stiff = oracle_compare(&ring(0.3), &cosine(0.9, 4096), 0).unwrap();
        stiff.ensure(1e-7).unwrap();
    }

    #[test]
    fn failed_comparison_is_structured() {
        let report = OracleReport {
            winding: 1,
            current_gap: 1e-3,
            energy_gap: 0.0,
            gradient_gap: 0.0,
            iterations: 10,
        };
        let err = report.ensure(1e-8).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("\"passed\":false"), "{text}");
        assert!(text.contains("\"winding\":1"));
    }
}
