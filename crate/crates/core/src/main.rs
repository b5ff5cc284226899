use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cdw_ring::sweep::{run, Settings, SweepError, SweepSpec};

/// Persistent currents and rotating-frame energetics of a superfluid ring
/// carrying a charge density wave.
#[derive(Debug, Parser)]
#[command(name = "cdw-ring", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steady state at a single flux.
    Steady(Overrides),
    /// Current, energy and angular momentum across a flux grid.
    FluxSweep(Overrides),
    /// Laboratory-frame energy of the rotating density wave across an Ω grid.
    OmegaSweep(Overrides),
    /// Exact and perturbative observables across a modulation-amplitude grid.
    AmplitudeSweep(Overrides),
    /// Field-induced density-wave amplitude across a flux grid.
    LandauSweep(Overrides),
    /// Randomised check that dE/dΩ vanishes at Ω = 0.
    Certify(Overrides),
    /// Run whatever `kind` the configuration file declares.
    Run(Overrides),
}

#[derive(Debug, Args)]
struct Overrides {
    /// Configuration file (`key = value` with [base], [grid], [output]).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Threading flux in flux quanta.
    #[arg(long, allow_hyphen_values = true)]
    flux: Option<String>,
    /// Cosine modulation amplitude relative to n₀.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long)]
    harmonic: Option<String>,
    /// Plain-text profile table (replaces the cosine profile).
    #[arg(long)]
    profile_file: Option<String>,
    /// Winding number, or `auto` for the ground state.
    #[arg(long, allow_hyphen_values = true)]
    winding: Option<String>,
    /// Sweep grid as start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    grid_size: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Also write the (θ, ħ∇S) table of a steady run here.
    #[arg(long)]
    phase_out: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    precision: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Number of random certificate cases.
    #[arg(long)]
    cases: Option<String>,
}

impl Overrides {
    fn settings(&self, kind: Option<&str>) -> Result<Settings, SweepError> {
        let mut settings = match &self.config {
            Some(path) => Settings::read(path)?,
            None => Settings::default(),
        };
        if let Some(kind) = kind {
            settings.set("kind", kind)?;
        }
        let pairs = [
            ("base.flux", &self.flux),
            ("base.epsilon", &self.epsilon),
            ("base.harmonic", &self.harmonic),
            ("base.profile_file", &self.profile_file),
            ("base.winding", &self.winding),
            ("base.grid_size", &self.grid_size),
            ("base.alpha", &self.alpha),
            ("base.beta", &self.beta),
            ("output.path", &self.out),
            ("output.phase_path", &self.phase_out),
            ("output.format", &self.format),
            ("output.precision", &self.precision),
            ("seed", &self.seed),
            ("cases", &self.cases),
        ];
        for (key, value) in pairs {
            if let Some(value) = value {
                settings.set(key, value.as_str())?;
            }
        }
        if let Some(grid) = &self.grid {
            let grid: cdw_ring::sweep::Grid = grid
                .parse()
                .map_err(|e| SweepError::Usage(format!("--grid: {e}")))?;
            settings.set("grid.start", format!("{:?}", grid.start))?;
            settings.set("grid.stop", format!("{:?}", grid.stop))?;
            settings.set("grid.count", grid.count.to_string())?;
        }
        Ok(settings)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), SweepError> {
    std::fs::write(path, contents).map_err(|source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.summary.csv"))
}

fn execute(cli: Cli) -> Result<i32, SweepError> {
    let (overrides, kind) = match &cli.command {
        Command::Steady(o) => (o, Some("steady")),
        Command::FluxSweep(o) => (o, Some("flux")),
        Command::OmegaSweep(o) => (o, Some("omega")),
        Command::AmplitudeSweep(o) => (o, Some("amplitude")),
        Command::LandauSweep(o) => (o, Some("landau")),
        Command::Certify(o) => (o, Some("certificate")),
        Command::Run(o) => {
            if o.config.is_none() {
                return Err(SweepError::Usage("`run` needs --config".into()));
            }
            (o, None)
        }
    };
    let spec = SweepSpec::from_settings(&overrides.settings(kind)?)?;
    let output = run(&spec)?;

    match &spec.output.path {
        Some(path) => {
            write_file(path, &output.body)?;
            if let Some(summary) = &output.summary_csv {
                write_file(&summary_path(path), summary)?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(output.body.as_bytes())
                .map_err(|source| SweepError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            if let Some(summary) = &output.summary_csv {
                eprint!("{summary}");
            }
        }
    }
    if let (Some(path), Some(table)) = (&spec.output.phase_path, &output.phase_table) {
        write_file(path, table)?;
    }
    if output.report.violation {
        eprintln!("certificate failed: dE/dΩ exceeded its bound");
    }
    Ok(output.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
