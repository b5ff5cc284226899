//! Ring geometry and physical constants.
//!
//! Everything is dimensionless. The defaults set `ħ = c = q = m = n₀ = R = 1`,
//! which makes the flux quantum `2πħc/q = 2π` and the vector potential `A`
//! coincide with the flux measured in flux quanta.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Physical constants and geometry of the ring.
///
/// The fields are public so formulas can keep every constant explicit;
/// [`RingConfig::validate`] is called by every operation that consumes
/// a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingConfig {
    /// Ring radius `R`; the perimeter is `L = 2πR`.
    pub radius: f64,
    /// Particle charge `q` (for Cooper pairs this would be `2e`).
    pub charge: f64,
    /// Particle mass `m`.
    pub mass: f64,
    /// Mean linear density `n₀ = N₀ / L`.
    pub base_density: f64,
    /// Tangential vector potential `A = Φ / L`.
    pub vector_potential: f64,
    pub hbar: f64,
    pub light_speed: f64,
}

impl Default for RingConfig {
    fn default() -> Self {
        Self {
            radius: 1.0,
            charge: 1.0,
            mass: 1.0,
            base_density: 1.0,
            vector_potential: 0.0,
            hbar: 1.0,
            light_speed: 1.0,
        }
    }
}

impl RingConfig {
    /// Returns a copy with the vector potential replaced.
    pub fn with_vector_potential(mut self, vector_potential: f64) -> Self {
        self.vector_potential = vector_potential;
        self
    }

    /// Returns a copy threaded by `flux_quanta` flux quanta.
    pub fn with_flux_quanta(mut self, flux_quanta: f64) -> Self {
        self.vector_potential = flux_quanta * self.flux_quantum_potential();
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radius", self.radius),
            ("mass", self.mass),
            ("base_density", self.base_density),
            ("hbar", self.hbar),
            ("light_speed", self.light_speed),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if !(self.charge.is_finite() && self.charge != 0.0) {
            return Err(Error::InvalidConfig(format!(
                "charge must be non-zero and finite, got {}",
                self.charge
            )));
        }
        if !self.vector_potential.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "vector_potential must be finite, got {}",
                self.vector_potential
            )));
        }
        Ok(())
    }

    /// Perimeter `L = 2πR`.
    pub fn perimeter(&self) -> f64 {
        2.0 * PI * self.radius
    }

    /// Total particle number `N₀ = n₀ L`.
    pub fn particle_number(&self) -> f64 {
        self.base_density * self.perimeter()
    }

    /// Gauge momentum `qA/c`.
    pub fn gauge_momentum(&self) -> f64 {
        self.charge * self.vector_potential / self.light_speed
    }

    /// Vector potential shift that adds one flux quantum: `ħc/(qR)`.
    pub fn flux_quantum_potential(&self) -> f64 {
        self.hbar * self.light_speed / (self.charge * self.radius)
    }

    /// Threading flux in units of the flux quantum, `a = qAR/(ħc)`.
    pub fn flux_quanta(&self) -> f64 {
        self.vector_potential / self.flux_quantum_potential()
    }

    /// `ħν/R − qA/c`: the mean kinetic momentum per particle in winding `ν`.
    ///
    /// Every steady-state quantity depends on the winding and the flux only
    /// through this combination.
    pub fn momentum_mismatch(&self, winding: i64) -> f64 {
        self.hbar * winding as f64 / self.radius - self.gauge_momentum()
    }
}
