use rayon::prelude::*;

use super::emit::{render_csv, render_json, render_summary_csv, Cell, Report, Table};
use super::spec::{Format, ProfileSource, SweepKind, SweepSpec, WindingPolicy};
use super::SweepError;
use crate::averages::compute_averages;
use crate::config::RingConfig;
use crate::error::Error;
use crate::landau::{instability_sweep, LandauParams};
use crate::profile::DensityProfile;
use crate::random::{random_cases, CaseBounds};
use crate::rotating::{rotation_scan, rotational_stiffness_perturbative, LabFrame, DERIVATIVE_STEP};
use crate::steady::{
    angular_momentum_perturbative, ground_state_winding, perturbative_current,
    perturbative_energy, solve_steady,
};

/// Relative bound on `|dE/dΩ|₀`, applied as `bound · max(E(0), 1)`.
pub const CERTIFICATE_BOUND: f64 = 1e-8;

/// Rendered output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// Main artifact in the requested format.
    pub body: String,
    /// `key,value` summary for CSV runs; JSON runs embed it in `body`.
    pub summary_csv: Option<String>,
    /// `(θ, ħ∇S)` table for steady runs that asked for one.
    pub phase_table: Option<String>,
    pub report: Report,
}

impl RunOutput {
    /// Process exit status: 1 when a certificate found a violation.
    pub fn exit_code(&self) -> i32 {
        if self.report.violation {
            1
        } else {
            0
        }
    }
}

fn model(err: Error) -> SweepError {
    SweepError::Model(err)
}

fn build_profile(spec: &SweepSpec, epsilon_override: Option<f64>) -> Result<DensityProfile, SweepError> {
    let base = &spec.base;
    let n0 = base.ring.base_density;
    match &base.profile {
        ProfileSource::Cosine { epsilon, harmonic } => DensityProfile::cosine(
            n0,
            epsilon_override.unwrap_or(*epsilon),
            *harmonic,
            base.grid_size,
        )
        .map_err(model),
        ProfileSource::File(path) => DensityProfile::read_table(path, n0).map_err(model),
    }
}

fn resolve_winding(
    policy: WindingPolicy,
    config: &RingConfig,
    profile: &DensityProfile,
) -> Result<i64, SweepError> {
    match policy {
        WindingPolicy::Fixed(n) => Ok(n),
        WindingPolicy::GroundState => ground_state_winding(config, profile).map_err(model),
    }
}

/// Runs a validated spec and renders its output.
pub fn run(spec: &SweepSpec) -> Result<RunOutput, SweepError> {
    let report = match spec.kind {
        SweepKind::Steady => run_steady(spec)?,
        SweepKind::Flux => run_flux(spec)?,
        SweepKind::Omega => run_omega(spec)?,
        SweepKind::Amplitude => run_amplitude(spec)?,
        SweepKind::Landau => run_landau(spec)?,
        SweepKind::Certificate => run_certificate(spec)?,
    };
    let precision = spec.output.precision;
    let (body, summary_csv) = match spec.output.format {
        Format::Csv => (
            render_csv(&report.table, precision),
            Some(render_summary_csv(&report.summary, precision)),
        ),
        Format::Json => (render_json(spec, &report), None),
    };
    let phase_table = match (spec.kind, &spec.output.phase_path) {
        (SweepKind::Steady, Some(_)) => Some(phase_table(spec)?),
        _ => None,
    };
    Ok(RunOutput {
        body,
        summary_csv,
        phase_table,
        report,
    })
}

fn phase_table(spec: &SweepSpec) -> Result<String, SweepError> {
    let profile = build_profile(spec, None)?;
    let winding = resolve_winding(spec.base.winding, &spec.base.ring, &profile)?;
    let state = solve_steady(&spec.base.ring, &profile, winding).map_err(model)?;
    let table = Table {
        columns: vec!["theta", "phase_gradient"],
        rows: state
            .phase_table()
            .into_iter()
            .map(|(t, g)| vec![Cell::Float(t), Cell::Float(g)])
            .collect(),
    };
    Ok(render_csv(&table, spec.output.precision))
}

fn run_steady(spec: &SweepSpec) -> Result<Report, SweepError> {
    let ring = &spec.base.ring;
    let profile = build_profile(spec, None)?;
    let winding = resolve_winding(spec.base.winding, ring, &profile)?;
    let state = solve_steady(ring, &profile, winding).map_err(model)?;
    let averages = compute_averages(ring, &profile).map_err(model)?;
    let mut summary = vec![
        ("current_perturbative", Cell::Float(perturbative_current(ring, &profile, winding).map_err(model)?)),
        ("energy_perturbative", Cell::Float(perturbative_energy(ring, &profile, winding).map_err(model)?)),
    ];
    if winding == 0 {
        summary.push((
            "angular_momentum_perturbative",
            Cell::Float(angular_momentum_perturbative(ring, &profile).map_err(model)?),
        ));
    }
    summary.extend([
        ("circulation", Cell::Float(state.circulation(ring))),
        ("inv_density_mean", Cell::Float(averages.inv_density_mean)),
        ("modulation_mean_square", Cell::Float(averages.modulation_mean_square)),
    ]);
    Ok(Report {
        table: Table {
            columns: vec!["flux", "winding", "current", "energy", "angular_momentum"],
            rows: vec![vec![
                Cell::Float(spec.base.flux),
                Cell::Int(state.winding),
                Cell::Float(state.current),
                Cell::Float(state.energy),
                Cell::Float(state.angular_momentum),
            ]],
        },
        summary,
        violation: false,
    })
}

fn run_flux(spec: &SweepSpec) -> Result<Report, SweepError> {
    let profile = build_profile(spec, None)?;
    let rows = spec
        .grid
        .points()
        .par_iter()
        .map(|&flux| {
            let ring = spec.base.ring.with_flux_quanta(flux);
            let winding = resolve_winding(spec.base.winding, &ring, &profile)?;
            let state = solve_steady(&ring, &profile, winding).map_err(model)?;
            Ok(vec![
                Cell::Float(flux),
                Cell::Int(winding),
                Cell::Float(state.current),
                Cell::Float(state.energy),
                Cell::Float(state.angular_momentum),
            ])
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    Ok(Report {
        summary: vec![("points", Cell::Int(rows.len() as i64))],
        table: Table {
            columns: vec!["flux", "winding", "current", "energy", "angular_momentum"],
            rows,
        },
        violation: false,
    })
}

fn run_omega(spec: &SweepSpec) -> Result<Report, SweepError> {
    let ring = &spec.base.ring;
    let profile = build_profile(spec, None)?;
    let winding = resolve_winding(spec.base.winding, ring, &profile)?;
    let scan = rotation_scan(ring, &profile, winding, &spec.grid.points()).map_err(model)?;
    let rows = scan
        .omegas
        .iter()
        .zip(&scan.energies)
        .map(|(&w, &e)| vec![Cell::Float(w), Cell::Float(e)])
        .collect();
    Ok(Report {
        table: Table {
            columns: vec!["omega", "energy"],
            rows,
        },
        summary: vec![
            ("winding", Cell::Int(winding)),
            ("derivative_at_zero", Cell::Sci(scan.derivative_at_zero)),
            ("stiffness_exact", Cell::Float(scan.stiffness)),
            (
                "stiffness_perturbative",
                Cell::Float(rotational_stiffness_perturbative(ring, &profile).map_err(model)?),
            ),
        ],
        violation: false,
    })
}

fn run_amplitude(spec: &SweepSpec) -> Result<Report, SweepError> {
    let ring = &spec.base.ring;
    let rows = spec
        .grid
        .points()
        .par_iter()
        .map(|&epsilon| {
            let profile = build_profile(spec, Some(epsilon))?;
            let winding = resolve_winding(spec.base.winding, ring, &profile)?;
            let state = solve_steady(ring, &profile, winding).map_err(model)?;
            let stiffness = LabFrame::new(ring, &profile, winding).map_err(model)?.stiffness();
            Ok(vec![
                Cell::Float(epsilon),
                Cell::Int(winding),
                Cell::Float(state.current),
                Cell::Float(state.energy),
                Cell::Float(state.angular_momentum),
                Cell::Float(stiffness),
                Cell::Float(perturbative_current(ring, &profile, winding).map_err(model)?),
                Cell::Float(perturbative_energy(ring, &profile, winding).map_err(model)?),
            ])
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    Ok(Report {
        summary: vec![("points", Cell::Int(rows.len() as i64))],
        table: Table {
            columns: vec![
                "epsilon",
                "winding",
                "current",
                "energy",
                "angular_momentum",
                "stiffness",
                "current_perturbative",
                "energy_perturbative",
            ],
            rows,
        },
        violation: false,
    })
}

fn run_landau(spec: &SweepSpec) -> Result<Report, SweepError> {
    let base = &spec.base;
    let params = LandauParams::with_shape_factor(base.alpha, base.beta, base.shape_factor)
        .map_err(|e| SweepError::Usage(e.to_string()))?;
    let harmonic = match base.profile {
        ProfileSource::Cosine { harmonic, .. } => harmonic,
        ProfileSource::File(_) => {
            return Err(SweepError::Usage(
                "landau sweeps use a cosine profile; `base.profile_file` is not allowed".into(),
            ))
        }
    };
    let rows = instability_sweep(&base.ring, &params, &spec.grid.points(), harmonic, base.grid_size)
        .map_err(model)?;
    let invalid = rows.iter().filter(|r| !r.valid).count();
    Ok(Report {
        table: Table {
            columns: vec!["flux", "winding", "alpha_eff", "amplitude", "energy_total"],
            rows: rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::Float(r.flux),
                        Cell::Int(r.winding),
                        Cell::Float(r.alpha_eff),
                        Cell::Float(r.amplitude),
                        Cell::Float(r.energy_total),
                    ]
                })
                .collect(),
        },
        summary: vec![
            ("points", Cell::Int(rows.len() as i64)),
            ("out_of_model_points", Cell::Int(invalid as i64)),
        ],
        violation: false,
    })
}

fn run_certificate(spec: &SweepSpec) -> Result<Report, SweepError> {
    let bounds = CaseBounds {
        grid_size: spec.base.grid_size,
        ..CaseBounds::default()
    };
    let cases = random_cases(spec.seed, spec.cases, &spec.base.ring, &bounds).map_err(model)?;
    let rows = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| {
            let frame = LabFrame::new(&case.config, &case.profile, case.winding).map_err(model)?;
            let energy = frame.energy(0.0);
            let derivative = frame.derivative_at_zero(DERIVATIVE_STEP);
            let bound = CERTIFICATE_BOUND * energy.max(1.0);
            Ok((i, case, energy, derivative, bound))
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    let mut violations = 0;
    let mut max_abs = 0.0_f64;
    let mut max_ratio = 0.0_f64;
    let table_rows = rows
        .iter()
        .map(|&(i, case, energy, derivative, bound)| {
            let passed = derivative.abs() < bound;
            violations += usize::from(!passed);
            max_abs = max_abs.max(derivative.abs());
            max_ratio = max_ratio.max(derivative.abs() / bound);
            vec![
                Cell::Int(i as i64),
                Cell::Float(case.flux),
                Cell::Int(case.winding),
                Cell::Float(case.epsilon),
                Cell::Int(case.terms.len() as i64),
                Cell::Float(energy),
                Cell::Sci(derivative),
                Cell::Sci(bound),
                Cell::Bool(passed),
            ]
        })
        .collect();
    Ok(Report {
        table: Table {
            columns: vec![
                "case",
                "flux",
                "winding",
                "epsilon",
                "harmonics",
                "energy",
                "derivative",
                "bound",
                "passed",
            ],
            rows: table_rows,
        },
        summary: vec![
            ("seed", Cell::UInt(spec.seed)),
            ("cases", Cell::Int(spec.cases as i64)),
            ("step", Cell::Sci(DERIVATIVE_STEP)),
            ("max_abs_derivative", Cell::Sci(max_abs)),
            ("max_bound_ratio", Cell::Sci(max_ratio)),
            ("violations", Cell::Int(violations as i64)),
            ("passed", Cell::Bool(violations == 0)),
        ],
        violation: violations > 0,
    })
}
