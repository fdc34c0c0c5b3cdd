//! Command-line front end: one subcommand per experiment, emitting CSV or
//! JSON with 12-significant-digit numerics. Exit codes: 0 success, 2 bad
//! arguments, 1 runtime failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::Value;

use crate::estimation::{
    sensitivity, shot_noise_sensitivity, variance_catalog, Observable, ProbeState,
    SensitivityReport, DEFAULT_DERIVATIVE_STEP,
};
use crate::fock::{apply_phase_shift, fidelity, mach_zehnder, FockState};
use crate::numeric::phase_grid;
use crate::output::{emit, fmt, number, to_csv, to_json, Report};
use crate::protocols::{
    deposition_rate, hom_entangle, make_named_state, optimal_reflectivity, peel_off, NamedState,
};
use crate::qubits::{
    collective_phase, make_ghz, rosetta_fringe, single_photon_swap_probability,
    ROSETTA_PHASE_OFFSET,
};
use crate::sampling::{scaling_experiment, SchemeKind};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "rosetta-sim",
    version,
    about = "Deterministic simulator for quantum-enhanced interferometry"
)]
struct Cli {
    /// Output format; defaults to csv for tables and json for scalar reports
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to a file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeScheme {
    /// N independent qubit probes read out together
    Separable,
    /// (|N,0⟩ + |0,N⟩)/√2 with the Aₙ observable
    Noon,
    /// Two-rung m = ±1/2 state behind a Mach–Zehnder, Jz detection
    Yurke,
    /// |N,N⟩ behind a Mach–Zehnder, Jz detection
    DualFock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScalingScheme {
    Separable,
    SingleFock,
    Noon,
}

impl ScalingScheme {
    fn kind(self) -> SchemeKind {
        match self {
            ScalingScheme::Separable => SchemeKind::SeparableQubits,
            ScalingScheme::SingleFock => SchemeKind::SingleFockMz,
            ScalingScheme::Noon => SchemeKind::Noon,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ScalingScheme::Separable => "separable",
            ScalingScheme::SingleFock => "single-fock",
            ScalingScheme::Noon => "noon",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Jz variances of the canonical N-photon probe classes
    VarianceCatalog {
        #[arg(long)]
        photons: u32,
    },
    /// Phase sensitivity Δφ = ΔA/|d⟨A⟩/dφ| swept over a phase grid
    Sensitivity {
        #[arg(long, value_enum)]
        scheme: ProbeScheme,
        /// Photon number (per input port for dual-fock; odd for yurke)
        #[arg(long)]
        photons: u32,
        #[arg(long, default_value_t = 101)]
        phase_points: usize,
    },
    /// Qubit-circuit fringe against the single-photon interferometer fringe
    Rosetta {
        #[arg(long, default_value_t = 101)]
        phase_points: usize,
    },
    /// N-qubit GHZ probe sensitivity at one operating phase
    Ghz {
        #[arg(long)]
        photons: u32,
        /// Operating phase; defaults to π/(2N), the maximum-slope point
        #[arg(long)]
        phase: Option<f64>,
    },
    /// Hong–Ou–Mandel: |1,1⟩ through a balanced beam splitter
    Hom,
    /// N-photon absorption fringe of the NOON state
    Lithography {
        #[arg(long)]
        photons: u32,
        #[arg(long, default_value_t = 721)]
        phase_points: usize,
    },
    /// Two-detector peel-off on |N,N⟩: success probability and residual
    PeelOff {
        #[arg(long)]
        photons: u32,
        /// Tap reflectivity r² in (0,1); defaults to 0.5
        #[arg(long)]
        reflectivity: Option<f64>,
        /// Also report the analytic 1/N optimum next to a numeric search
        #[arg(long)]
        optimize: bool,
    },
    /// Monte Carlo Δφ(N) and its fitted power law
    Scaling {
        #[arg(long, value_enum)]
        scheme: ScalingScheme,
        /// Comma-separated photon numbers, e.g. 4,16,64,256
        #[arg(long, required = true, value_delimiter = ',')]
        photons_list: Vec<u32>,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 2000)]
        repetitions: u32,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
}

/// Parse `argv`, run the subcommand, and emit its report.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let (report, default_format) = match execute(&cli.command) {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("error: {err}");
            return exit_code(&err);
        }
    };
    let text = match cli.format.unwrap_or(default_format) {
        Format::Csv => to_csv(&report),
        Format::Json => to_json(&report),
    };
    if let Err(err) = emit(&text, cli.output.as_deref()) {
        eprintln!("error: cannot write output: {err}");
        return 1;
    }
    0
}

/// Errors caused by flag values rather than by the computation itself.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::PhotonNumberTooSmall { .. }
        | Error::OddPhotonNumberRequired { .. }
        | Error::ReflectivityOutOfRange { .. }
        | Error::GridTooSmall { .. }
        | Error::ZeroTrials
        | Error::TooFewRepetitions { .. }
        | Error::TooFewTrials { .. }
        | Error::InsufficientScalingRange
        | Error::PhaseOutsideInvertibleBranch { .. } => 2,
        _ => 1,
    }
}

fn require_photons(photons: u32, min: u32) -> Result<()> {
    if photons < min {
        return Err(Error::PhotonNumberTooSmall { photons, min });
    }
    Ok(())
}

fn require_grid(points: usize) -> Result<()> {
    if points < 2 {
        return Err(Error::GridTooSmall { got: points, min: 2 });
    }
    Ok(())
}

fn execute(command: &Command) -> Result<(Report, Format)> {
    match command {
        Command::VarianceCatalog { photons } => {
            require_photons(*photons, 1)?;
            let catalog = variance_catalog(*photons)?;
            let mut map = BTreeMap::new();
            map.insert("photons".to_string(), Value::from(*photons));
            map.insert("uniform".to_string(), number(catalog.uniform));
            map.insert("extreme".to_string(), number(catalog.extreme));
            map.insert("binomial".to_string(), number(catalog.binomial));
            map.insert("delta_q_extreme".to_string(), number(catalog.delta_q_extreme));
            Ok((Report::Scalars(map), Format::Json))
        }
        Command::Sensitivity { scheme, photons, phase_points } => {
            let n = *photons;
            require_photons(n, 1)?;
            require_grid(*phase_points)?;
            let grid = phase_grid(*phase_points);
            let reports = match scheme {
                ProbeScheme::Separable => grid
                    .iter()
                    .map(|&phi| shot_noise_sensitivity(n, phi, DEFAULT_DERIVATIVE_STEP))
                    .collect::<Result<Vec<_>>>()?,
                ProbeScheme::Noon => {
                    let noon = make_named_state(NamedState::Noon, n)?;
                    let family = |phi: f64| -> Result<ProbeState> {
                        Ok(apply_phase_shift(&noon, 0, phi)?.into())
                    };
                    grid.iter()
                        .map(|&phi| {
                            sensitivity(&family, Observable::AnSubspace, phi, DEFAULT_DERIVATIVE_STEP)
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                ProbeScheme::Yurke => {
                    jz_sweep(make_named_state(NamedState::Yurke, n)?, &grid)?
                }
                ProbeScheme::DualFock => {
                    jz_sweep(make_named_state(NamedState::DualFock, n)?, &grid)?
                }
            };
            Ok((sensitivity_table(&grid, &reports), Format::Csv))
        }
        Command::Rosetta { phase_points } => {
            require_grid(*phase_points)?;
            let grid = phase_grid(*phase_points);
            let circuit: Vec<f64> = grid.iter().map(|&phi| rosetta_fringe(phi)).collect();
            let interferometer: Vec<f64> = grid
                .iter()
                .map(|&phi| single_photon_swap_probability(phi + ROSETTA_PHASE_OFFSET))
                .collect();
            let difference: Vec<Value> = circuit
                .iter()
                .zip(&interferometer)
                .map(|(c, i)| number(c - i))
                .collect();
            let columns = vec![
                ("phi".to_string(), grid.iter().map(|&x| number(x)).collect()),
                ("circuit".to_string(), circuit.iter().map(|&x| number(x)).collect()),
                ("interferometer".to_string(), interferometer.iter().map(|&x| number(x)).collect()),
                ("difference".to_string(), difference),
            ];
            Ok((
                Report::Table { columns, extras: BTreeMap::new(), trailer: None },
                Format::Csv,
            ))
        }
        Command::Ghz { photons, phase } => {
            require_photons(*photons, 1)?;
            let ghz = make_ghz(*photons as usize)?;
            let phi = phase.unwrap_or(std::f64::consts::FRAC_PI_2 / f64::from(*photons));
            let family =
                |phi: f64| -> Result<ProbeState> { Ok(collective_phase(&ghz, phi).into()) };
            let report = sensitivity(&family, Observable::AnSubspace, phi, DEFAULT_DERIVATIVE_STEP)?;
            let mut map = BTreeMap::new();
            map.insert("photons".to_string(), Value::from(*photons));
            map.insert("phase".to_string(), number(phi));
            map.insert("expectation".to_string(), number(report.expectation));
            map.insert("std_dev".to_string(), number(report.std_dev));
            map.insert("derivative".to_string(), number(report.derivative));
            map.insert(
                "delta_phi".to_string(),
                report.delta_phi.map_or(Value::Null, number),
            );
            map.insert("divergent".to_string(), Value::Bool(report.divergent));
            map.insert(
                "heisenberg_delta_phi".to_string(),
                number(1.0 / f64::from(*photons)),
            );
            Ok((Report::Scalars(map), Format::Json))
        }
        Command::Hom => {
            let out = hom_entangle();
            let noon2 = make_named_state(NamedState::Noon, 2)?;
            let mut map = BTreeMap::new();
            map.insert(
                "coincidence_probability".to_string(),
                number(out.amplitude(&[1, 1]).norm_sqr()),
            );
            map.insert(
                "probability_2_0".to_string(),
                number(out.amplitude(&[2, 0]).norm_sqr()),
            );
            map.insert(
                "probability_0_2".to_string(),
                number(out.amplitude(&[0, 2]).norm_sqr()),
            );
            map.insert("noon_fidelity".to_string(), number(fidelity(&out, &noon2)?));
            Ok((Report::Scalars(map), Format::Json))
        }
        Command::Lithography { photons, phase_points } => {
            require_photons(*photons, 1)?;
            require_grid(*phase_points)?;
            let noon = make_named_state(NamedState::Noon, *photons)?;
            let curve = deposition_rate(&noon, &phase_grid(*phase_points))?;
            let columns = vec![
                ("phi".to_string(), curve.phi_grid.iter().map(|&x| number(x)).collect()),
                ("rate".to_string(), curve.normalized_rate.iter().map(|&x| number(x)).collect()),
            ];
            Ok((
                Report::Table { columns, extras: BTreeMap::new(), trailer: None },
                Format::Csv,
            ))
        }
        Command::PeelOff { photons, reflectivity, optimize } => {
            let n = *photons;
            require_photons(n, 2)?;
            let r2 = reflectivity.unwrap_or(0.5);
            let result = peel_off(n, r2)?;
            let target = FockState::superposition(vec![
                (vec![n, n - 2], Complex64::ONE),
                (vec![n - 2, n], Complex64::ONE),
            ])?;
            let mut map = BTreeMap::new();
            map.insert("photons".to_string(), Value::from(n));
            map.insert("reflectivity".to_string(), number(r2));
            map.insert(
                "success_probability".to_string(),
                number(result.success_probability),
            );
            map.insert("amplitude_a".to_string(), number(result.amplitude_a));
            map.insert(
                "conditional_fidelity".to_string(),
                number(fidelity(&result.conditional_state, &target)?),
            );
            if *optimize {
                let (r2_star, p_star) = optimal_reflectivity(n)?;
                map.insert(
                    "analytic_reflectivity".to_string(),
                    number(1.0 / f64::from(n)),
                );
                map.insert("optimized_reflectivity".to_string(), number(r2_star));
                map.insert("optimized_probability".to_string(), number(p_star));
            }
            Ok((Report::Scalars(map), Format::Json))
        }
        Command::Scaling { scheme, photons_list, trials, repetitions, seed } => {
            let result =
                scaling_experiment(scheme.kind(), photons_list, *trials, *repetitions, *seed)?;
            let columns = vec![
                (
                    "N".to_string(),
                    result.n_values.iter().map(|&n| Value::from(n)).collect(),
                ),
                (
                    "delta_phi".to_string(),
                    result.delta_phi_empirical.iter().map(|&d| number(d)).collect(),
                ),
            ];
            let mut extras = BTreeMap::new();
            extras.insert("scheme".to_string(), Value::String(scheme.name().to_string()));
            extras.insert("fitted_exponent".to_string(), number(result.fitted_exponent));
            extras.insert("exponent_stderr".to_string(), number(result.exponent_stderr));
            extras.insert("trials".to_string(), Value::from(*trials));
            extras.insert("repetitions".to_string(), Value::from(*repetitions));
            extras.insert("seed".to_string(), Value::from(*seed));
            let trailer = Some(format!("# exponent={}", fmt(result.fitted_exponent)));
            Ok((Report::Table { columns, extras, trailer }, Format::Csv))
        }
    }
}

fn jz_sweep(probe: FockState, grid: &[f64]) -> Result<Vec<SensitivityReport>> {
    let family = |phi: f64| -> Result<ProbeState> { Ok(mach_zehnder(&probe, phi)?.into()) };
    grid.iter()
        .map(|&phi| sensitivity(&family, Observable::Jz, phi, DEFAULT_DERIVATIVE_STEP))
        .collect()
}

fn sensitivity_table(grid: &[f64], reports: &[SensitivityReport]) -> Report {
    let columns = vec![
        ("phi".to_string(), grid.iter().map(|&x| number(x)).collect()),
        (
            "expectation".to_string(),
            reports.iter().map(|r| number(r.expectation)).collect(),
        ),
        ("std_dev".to_string(), reports.iter().map(|r| number(r.std_dev)).collect()),
        (
            "derivative".to_string(),
            reports.iter().map(|r| number(r.derivative)).collect(),
        ),
        (
            "delta_phi".to_string(),
            reports.iter().map(|r| r.delta_phi.map_or(Value::Null, number)).collect(),
        ),
    ];
    Report::Table { columns, extras: BTreeMap::new(), trailer: None }
}
