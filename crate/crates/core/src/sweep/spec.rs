use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::settings::Settings;
use super::SweepError;
use crate::config::RingConfig;
use crate::profile::DEFAULT_GRID_SIZE;

pub const DEFAULT_PRECISION: usize = 12;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CASES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Steady,
    Flux,
    Omega,
    Amplitude,
    Landau,
    Certificate,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Steady => "steady",
            SweepKind::Flux => "flux",
            SweepKind::Omega => "omega",
            SweepKind::Amplitude => "amplitude",
            SweepKind::Landau => "landau",
            SweepKind::Certificate => "certificate",
        }
    }

    /// Grid used when the configuration gives none.
    pub fn default_grid(self) -> Grid {
        match self {
            SweepKind::Flux | SweepKind::Landau => Grid::new(0.0, 2.0, 201),
            SweepKind::Omega => Grid::new(
                -crate::rotating::SCAN_HALF_WIDTH,
                crate::rotating::SCAN_HALF_WIDTH,
                crate::rotating::SCAN_POINTS,
            ),
            SweepKind::Amplitude => Grid::new(0.0, 0.5, 51),
            SweepKind::Steady | SweepKind::Certificate => Grid::new(0.0, 0.0, 1),
        }
    }

    fn default_format(self) -> Format {
        match self {
            SweepKind::Certificate => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "steady" => SweepKind::Steady,
            "flux" | "flux-sweep" => SweepKind::Flux,
            "omega" | "omega-sweep" => SweepKind::Omega,
            "amplitude" | "amplitude-sweep" => SweepKind::Amplitude,
            "landau" | "landau-sweep" => SweepKind::Landau,
            "certificate" | "certify" => SweepKind::Certificate,
            other => return Err(format!("unknown sweep kind {other:?}")),
        })
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.count < 1 {
            return Err(SweepError::Usage("grid count must be at least 1".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(SweepError::Usage("grid bounds must be finite".into()));
        }
        if self.start > self.stop {
            return Err(SweepError::Usage(format!(
                "grid start {} exceeds stop {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        crate::rotating::linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for Grid {
    type Err = String;

    /// `start:stop:count`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        Ok(Grid {
            start: start.trim().parse().map_err(|e| format!("grid start: {e}"))?,
            stop: stop.trim().parse().map_err(|e| format!("grid stop: {e}"))?,
            count: count.trim().parse().map_err(|e| format!("grid count: {e}"))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSource {
    Cosine { epsilon: f64, harmonic: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindingPolicy {
    Fixed(i64),
    GroundState,
}

impl FromStr for WindingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(WindingPolicy::GroundState);
        }
        s.parse()
            .map(WindingPolicy::Fixed)
            .map_err(|_| format!("expected an integer or `auto`, got {s:?}"))
    }
}

impl fmt::Display for WindingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindingPolicy::Fixed(n) => write!(f, "{n}"),
            WindingPolicy::GroundState => f.write_str("auto"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv or json, got {other:?}")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub phase_path: Option<PathBuf>,
    pub format: Format,
    pub precision: usize,
}

/// Ring, profile and winding shared by every sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSpec {
    /// Ring constants; the vector potential is set from `flux`.
    pub ring: RingConfig,
    /// Threading flux in flux quanta.
    pub flux: f64,
    pub profile: ProfileSource,
    pub grid_size: usize,
    pub winding: WindingPolicy,
    pub alpha: f64,
    pub beta: f64,
    pub shape_factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub grid: Grid,
    pub base: BaseSpec,
    pub output: OutputSpec,
    pub seed: u64,
    pub cases: usize,
}

fn usage<E: fmt::Display>(key: &str) -> impl FnOnce(E) -> SweepError + '_ {
    move |e| SweepError::Usage(format!("key `{key}`: {e}"))
}

impl SweepSpec {
    /// Builds and validates a spec. `kind` must be present in `settings`.
    pub fn from_settings(settings: &Settings) -> Result<Self, SweepError> {
        let kind: SweepKind = settings
            .get("kind")
            .ok_or_else(|| SweepError::Usage("missing required key `kind`".into()))?
            .parse()
            .map_err(usage("kind"))?;

        let f = |key: &str, default: f64| -> Result<f64, SweepError> {
            Ok(settings.parsed::<f64>(key)?.unwrap_or(default))
        };
        let defaults = RingConfig::default();
        let mut ring = RingConfig {
            radius: f("base.radius", defaults.radius)?,
            charge: f("base.charge", defaults.charge)?,
            mass: f("base.mass", defaults.mass)?,
            base_density: f("base.base_density", defaults.base_density)?,
            ..defaults
        };
        ring.validate().map_err(|e| SweepError::Usage(e.to_string()))?;
        let flux = f("base.flux", 0.0)?;
        if !flux.is_finite() {
            return Err(SweepError::Usage("key `base.flux`: must be finite".into()));
        }
        ring = ring.with_flux_quanta(flux);

        let profile = match settings.get("base.profile_file") {
            Some(path) => {
                if settings.contains("base.epsilon") || settings.contains("base.harmonic") {
                    return Err(SweepError::Usage(
                        "`base.profile_file` cannot be combined with `base.epsilon` or `base.harmonic`"
                            .into(),
                    ));
                }
                ProfileSource::File(PathBuf::from(path))
            }
            None => {
                let epsilon = f("base.epsilon", 0.0)?;
                if epsilon.is_nan() || epsilon.abs() >= 1.0 {
                    return Err(SweepError::Usage(format!(
                        "amplitude must satisfy |ε| < 1, got {epsilon}"
                    )));
                }
                let harmonic = settings.parsed::<usize>("base.harmonic")?.unwrap_or(1);
                if harmonic == 0 {
                    return Err(SweepError::Usage("key `base.harmonic`: must be at least 1".into()));
                }
                ProfileSource::Cosine { epsilon, harmonic }
            }
        };

        let grid_size = settings
            .parsed::<usize>("base.grid_size")?
            .unwrap_or(DEFAULT_GRID_SIZE);
        if grid_size < crate::profile::MIN_GRID_SIZE {
            return Err(SweepError::Usage(format!(
                "key `base.grid_size`: must be at least {}",
                crate::profile::MIN_GRID_SIZE
            )));
        }
        let winding = settings
            .parsed::<WindingPolicy>("base.winding")?
            .unwrap_or(WindingPolicy::GroundState);

        let beta = f("base.beta", 0.5)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(SweepError::Usage("key `base.beta`: must be positive".into()));
        }
        let shape_factor = f("base.shape_factor", crate::landau::COSINE_SHAPE_FACTOR)?;
        if !(shape_factor > 0.0 && shape_factor.is_finite()) {
            return Err(SweepError::Usage("key `base.shape_factor`: must be positive".into()));
        }

        let default_grid = kind.default_grid();
        let grid = Grid {
            start: f("grid.start", default_grid.start)?,
            stop: f("grid.stop", default_grid.stop)?,
            count: settings.parsed::<usize>("grid.count")?.unwrap_or(default_grid.count),
        };
        grid.validate()?;
        if kind == SweepKind::Amplitude {
            if matches!(profile, ProfileSource::File(_)) {
                return Err(SweepError::Usage(
                    "amplitude sweeps scale a cosine profile; `base.profile_file` is not allowed"
                        .into(),
                ));
            }
            if grid.start <= -1.0 || grid.stop >= 1.0 {
                return Err(SweepError::Usage(
                    "amplitude must satisfy |ε| < 1 across the grid".into(),
                ));
            }
        }

        let precision = settings
            .parsed::<usize>("output.precision")?
            .unwrap_or(DEFAULT_PRECISION);
        if !(6..=17).contains(&precision) {
            return Err(SweepError::Usage(format!(
                "key `output.precision`: must lie in [6, 17], got {precision}"
            )));
        }
        let output = OutputSpec {
            path: settings.get("output.path").map(PathBuf::from),
            phase_path: settings.get("output.phase_path").map(PathBuf::from),
            format: settings
                .parsed::<Format>("output.format")?
                .unwrap_or(kind.default_format()),
            precision,
        };

        Ok(SweepSpec {
            kind,
            grid,
            base: BaseSpec {
                ring,
                flux,
                profile,
                grid_size,
                winding,
                alpha: f("base.alpha", -0.1)?,
                beta,
                shape_factor,
            },
            output,
            seed: settings.parsed::<u64>("seed")?.unwrap_or(DEFAULT_SEED),
            cases: settings.parsed::<usize>("cases")?.unwrap_or(DEFAULT_CASES),
        })
    }
}

/// Reads a configuration file into a validated spec.
pub fn load_config(path: &Path) -> Result<SweepSpec, SweepError> {
    SweepSpec::from_settings(&Settings::read(path)?)
}
