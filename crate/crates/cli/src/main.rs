//! `reslab`: zero tables, band maps, sphere resonance sweeps, Weyl reports and
//! model well-posedness demos.
//!
//! Exit codes: 0 on success, 1 for usage errors and malformed configs, 2 for
//! numeric failures (a diagnostic JSON object is written to stderr).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use reslab_core::airy::build_zero_table;
use reslab_core::bands::{band_curves, BandCurveRow, DEFAULT_C_MARGIN};
use reslab_core::export::{read_resonances_csv, write_band_curves_csv, write_json, write_resonances_csv, write_zero_table_csv};
use reslab_core::geometry::{band_constants, BandConstants, ObstacleModel};
use reslab_core::grushin::{wellposedness_sweep, SweepSettings};
use reslab_core::sphere::{compute_resonances_with, weyl_count, BoundaryCondition, SweepOptions, WeylCount};
use reslab_core::{Complex64, Error};

/// Zeros kept for band classification and band constants.
const TABLE_SIZE: usize = 60;

#[derive(Parser, Debug)]
#[command(name = "reslab", version, about = "Resonance band laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    l_max: Option<usize>,
    #[arg(long, global = true)]
    r: Option<f64>,
    #[arg(long, global = true)]
    j: Option<usize>,
    #[arg(long, global = true)]
    c_margin: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq)]
enum Command {
    /// Table of ζ_j, ζ'_j, e_j(0) and ‖Ai(· - ζ'_j)‖.
    AiryZeros {
        /// Number of zeros (the config key is `j_max`).
        #[arg(long)]
        j_max: Option<usize>,
    },
    /// Band constants and band edge curves for an obstacle.
    Bands,
    /// Exact resonances of a sphere.
    SphereResonances,
    /// Band-j Weyl count from a resonance CSV.
    Weyl,
    /// Well-posedness sweep of the model Grushin problem.
    GrushinDemo,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

/// Everything a run can be configured with. Unknown keys are rejected.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    obstacle: Option<ObstacleModel>,
    bc: Option<String>,
    radius: Option<f64>,
    l_max: Option<usize>,
    r: Option<f64>,
    j: Option<usize>,
    j_max: Option<usize>,
    c_margin: Option<f64>,
    tol: Option<f64>,
    /// Re λ grid for band curves.
    re_values: Option<Vec<f64>>,
    /// Band count in the curve output.
    bands: Option<usize>,
    /// Resonance CSV consumed by `weyl`.
    records: Option<PathBuf>,
    lambdas: Option<Vec<f64>>,
    z: Option<[f64; 2]>,
    mu: Option<f64>,
    c1: Option<f64>,
    trials: Option<usize>,
    verify_count: Option<bool>,
}

enum Failure {
    Usage(String),
    Numeric { kind: &'static str, message: String, detail: serde_json::Value },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::InvalidInput(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Incomplete { .. } => {
                return Failure::Usage(e.to_string())
            }
            Error::Domain(_) => "domain",
            Error::NonConvergence { .. } => "non_convergence",
            Error::BoundaryTooClose { .. } => "boundary_too_close",
            Error::AiryOverflow { .. } => "airy_overflow",
            Error::QuadratureNonConvergence { .. } => "quadrature_non_convergence",
            Error::SingularSystem { .. } => "singular_system",
            Error::Truncation { .. } => "truncation",
        };
        Failure::Numeric { kind, message: e.to_string(), detail: serde_json::Value::Null }
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("reslab: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric { kind, message, detail }) => {
            let diag = json!({ "error": kind, "message": message, "command": command_name(cli.command), "detail": detail });
            eprintln!("{}", serde_json::to_string_pretty(&diag).unwrap_or_default());
            ExitCode::from(2)
        }
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::AiryZeros { .. } => "airy-zeros",
        Command::Bands => "bands",
        Command::SphereResonances => "sphere-resonances",
        Command::Weyl => "weyl",
        Command::GrushinDemo => "grushin-demo",
    }
}

fn run(cli: &Cli) -> Outcome {
    configure_threads()?;
    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    match cli.command {
        Command::AiryZeros { j_max } => airy_zeros(cli, j_max.or(cfg.j_max)),
        Command::Bands => bands(cli, &cfg),
        Command::SphereResonances => sphere(cli, &cfg),
        Command::Weyl => weyl(cli, &cfg),
        Command::GrushinDemo => grushin_demo(cli, &cfg),
    }
}

/// `RESLAB_THREADS` caps the worker pool.
fn configure_threads() -> Outcome {
    let Ok(v) = std::env::var("RESLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("RESLAB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("thread pool: {e}")))
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| usage(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish(mut w: Box<dyn Write>) -> Outcome {
    w.flush().map_err(|e| usage(format!("write failed: {e}")))
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("{name} must be positive and finite, got {v}")))
    }
}

fn margin(cli: &Cli, cfg: &RunConfig) -> Result<f64, Failure> {
    let c = cli.c_margin.or(cfg.c_margin).unwrap_or(DEFAULT_C_MARGIN);
    if c >= 0.0 && c.is_finite() {
        Ok(c)
    } else {
        Err(usage(format!("--c-margin must be non-negative, got {c}")))
    }
}

fn airy_zeros(cli: &Cli, j_max: Option<usize>) -> Outcome {
    let n = j_max.unwrap_or(50);
    if n == 0 {
        return Err(usage("J_max must be at least 1"));
    }
    let table = build_zero_table(n)?;
    let mut out = open_out(cli.out.as_deref())?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_zero_table_csv(&table, &mut out)?,
        Format::Json => write_json(&table, &mut out)?,
    }
    finish(out)
}

#[derive(Serialize)]
struct BandsReport<'a> {
    obstacle: &'a ObstacleModel,
    c_margin: f64,
    constants: &'a BandConstants,
    curves: &'a [BandCurveRow],
}

fn bands(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let obstacle = cfg.obstacle.clone().unwrap_or(ObstacleModel::Sphere { radius: 1.0 });
    obstacle.validate().map_err(|e| usage(e.to_string()))?;
    let c = margin(cli, cfg)?;
    let table = build_zero_table(TABLE_SIZE)?;
    let constants = band_constants(&obstacle, &table).map_err(|e| usage(e.to_string()))?;
    let re_values = match &cfg.re_values {
        Some(v) if v.iter().all(|x| *x > 0.0 && x.is_finite()) => v.clone(),
        Some(_) => return Err(usage("re_values must be positive")),
        None => (0..=60).map(|k| 10f64.powf(k as f64 / 20.0)).collect(),
    };
    let count = cfg.bands.unwrap_or(5).clamp(1, TABLE_SIZE);
    let curves = band_curves(&constants, &table.zeros_ai_prime, c, &re_values, count);
    let report = BandsReport { obstacle: &obstacle, c_margin: c, constants: &constants, curves: &curves };
    match cli.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let mut out = open_out(cli.out.as_deref())?;
            write_json(&report, &mut out)?;
            finish(out)
        }
        Format::Csv => {
            let mut out = open_out(cli.out.as_deref())?;
            write_band_curves_csv(&curves, &mut out)?;
            finish(out)?;
            // the constants go next to the curves, or to stderr without --out
            let side = json!({ "obstacle": obstacle, "c_margin": c, "constants": constants });
            match &cli.out {
                Some(p) => {
                    let f = File::create(sidecar(p)).map_err(|e| usage(e.to_string()))?;
                    write_json(&side, BufWriter::new(f))?;
                }
                None => write_json(&side, io::stderr().lock())?,
            }
            Ok(())
        }
    }
}

/// `curves.csv` → `curves.constants.json`.
fn sidecar(p: &Path) -> PathBuf {
    p.with_extension("constants.json")
}

fn boundary_condition(cfg: &RunConfig) -> Result<BoundaryCondition, Failure> {
    match &cfg.bc {
        Some(s) => BoundaryCondition::parse(s).map_err(|e| usage(e.to_string())),
        None => Ok(BoundaryCondition::Neumann),
    }
}

fn sphere_radius(cfg: &RunConfig) -> Result<f64, Failure> {
    match (&cfg.obstacle, cfg.radius) {
        (_, Some(a)) => positive("radius", a),
        (Some(ObstacleModel::Sphere { radius }), None) => positive("radius", *radius),
        (Some(_), None) => Err(usage("exact resonances need a sphere obstacle")),
        (None, None) => Ok(1.0),
    }
}

fn sphere(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let bc = boundary_condition(cfg)?;
    let radius = sphere_radius(cfg)?;
    let l_max = cli.l_max.or(cfg.l_max).unwrap_or(40);
    let defaults = SweepOptions::default();
    let options = SweepOptions {
        tol: cli.tol.or(cfg.tol).unwrap_or(defaults.tol),
        c_margin: margin(cli, cfg)?,
        verify_count: cfg.verify_count.unwrap_or(defaults.verify_count),
    };
    let table = build_zero_table(TABLE_SIZE)?;
    let set = compute_resonances_with(bc, radius, l_max, &options, &table)?;
    let mut out = open_out(cli.out.as_deref())?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_resonances_csv(&set.records, &mut out)?,
        Format::Json => write_json(&set, &mut out)?,
    }
    finish(out)?;
    if !set.failures.is_empty() {
        let failed: Vec<_> = set.failures.iter().map(|(l, why)| json!({ "l": l, "reason": why })).collect();
        return Err(Failure::Numeric {
            kind: "partial_sweep",
            message: format!("{} of {} angular momenta failed; the other records were written", failed.len(), l_max + 1),
            detail: json!(failed),
        });
    }
    Ok(())
}

fn weyl(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let path = cfg.records.as_ref().ok_or_else(|| usage("weyl needs a resonance CSV: set \"records\" in --config"))?;
    let file = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let records = read_resonances_csv(file)?;
    let r = positive("--r", cli.r.or(cfg.r).ok_or_else(|| usage("weyl needs --r"))?)?;
    let j = cli.j.or(cfg.j).unwrap_or(1);
    let radius = sphere_radius(cfg)?;
    let l_max = cli.l_max.or(cfg.l_max).or_else(|| records.iter().map(|x| x.l).max()).unwrap_or(0);
    let table = build_zero_table(TABLE_SIZE)?;
    let constants = band_constants(&ObstacleModel::Sphere { radius }, &table)?;
    let zeros = match records.first().map(|x| x.bc) {
        Some(BoundaryCondition::Dirichlet) => &table.zeros_ai,
        _ => &table.zeros_ai_prime,
    };
    let count: WeylCount = weyl_count(&records, l_max, radius, r, j, &constants, zeros, margin(cli, cfg)?)?;
    let mut out = open_out(cli.out.as_deref())?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&count, &mut out)?,
        Format::Csv => {
            writeln!(out, "r,j,count,predicted,ratio")
                .and_then(|_| {
                    writeln!(out, "{:.16e},{},{},{:.16e},{:.16e}", count.r, count.j, count.count, count.predicted, count.ratio)
                })
                .map_err(|e| usage(format!("write failed: {e}")))?;
        }
    }
    finish(out)
}

fn grushin_demo(cli: &Cli, cfg: &RunConfig) -> Outcome {
    if cli.format == Some(Format::Csv) {
        return Err(usage("grushin-demo writes JSON only"));
    }
    let d = SweepSettings::default();
    let settings = SweepSettings {
        z: cfg.z.map(|[a, b]| Complex64::new(a, b)).unwrap_or(d.z),
        mu: cfg.mu.unwrap_or(d.mu),
        c1: cfg.c1.unwrap_or(d.c1),
        trials: cfg.trials.unwrap_or(d.trials),
        extra_modes: d.extra_modes,
        seed: cli.seed,
    };
    let lambdas = cfg.lambdas.clone().unwrap_or_else(|| vec![0.0, 10.0, 40.0, 160.0]);
    if lambdas.len() < 2 {
        return Err(usage("the λ-sweep needs at least two values"));
    }
    let table = build_zero_table(200)?;
    let report = wellposedness_sweep(&lambdas, &settings, &table)?;
    let mut out = open_out(cli.out.as_deref())?;
    write_json(&report, &mut out)?;
    finish(out)
}
