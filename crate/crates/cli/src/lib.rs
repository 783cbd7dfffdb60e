//! Command-line front end for `quatrange`.

pub mod demo;
pub mod emit;
pub mod report;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use quatrange::chi::operator_norm;
use quatrange::io::{parse_matrix, ParseError};
use quatrange::range::{numerical_radius, radius_lower_bound, section_plus, sample_range, Section2D};
use quatrange::spectrum::verify_spectrum;
use quatrange::twobytwo::{classify_case, triangularize2, Region2D, CASE_TOL};
use quatrange::QMatrix;

pub use demo::{demo_names, run_demo};
pub use emit::{emit_csv, emit_svg};
pub use report::{VerifyReport, SCHEMA_VERSION};
pub use verify::run_verify;

const DEMO_HELP: &str = "Demos: diag-j, radius-one, square-norm, neednot, diag-k11, diag-kk, case1, case2, case3, case4";

#[derive(Debug, Parser)]
#[command(name = "quatrange", version, about = "Numerical ranges of quaternionic matrices", after_help = DEMO_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standard eigenvalues with residual checks (JSON).
    Spectrum,
    /// Numerical radius, operator norm and a sampled lower bound (JSON).
    Radius,
    /// Operator norms of A and A² (JSON).
    Norm,
    /// Sampled section as CSV; --svg adds a plot.
    Section,
    /// Closed-form case of a 2×2 matrix (JSON); --svg adds a plot.
    Classify,
    /// Full property battery (JSON report); exit code 1 on any failure.
    Verify,
    /// Runs the checks for a built-in example; -o names an output directory.
    Demo {
        /// One of the registered demo names.
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct Options {
    /// Matrix file: {"n": N, "entries": [[[q0,q1,q2,q3], ...], ...]}.
    #[arg(short, long, global = true)]
    pub input: Option<PathBuf>,
    /// Sampled unit vectors.
    #[arg(short = 'n', long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    /// Angle grid for the radius sweep.
    #[arg(long, global = true, default_value_t = 720)]
    pub angles: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Budget for sampled hull distances in `verify` and containment slack in `classify`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file (a directory for `demo`); stdout when absent.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
    /// SVG plot of the section.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Include wall-clock runtimes in reports (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,
}

/// Validated options shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub samples: usize,
    pub angles: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            samples: 100_000,
            angles: 720,
            seed: 42,
            tol: None,
            out: None,
            svg: None,
            timings: false,
        }
    }
}

impl TryFrom<Options> for RunConfig {
    type Error = CliError;

    fn try_from(o: Options) -> Result<Self, CliError> {
        if o.samples < 1 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        if o.angles < 8 {
            return Err(CliError::Usage("--angles must be at least 8".into()));
        }
        if let Some(t) = o.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Usage("--tol must be a non-negative number".into()));
            }
        }
        Ok(Self {
            input: o.input,
            samples: o.samples,
            angles: o.angles,
            seed: o.seed,
            tol: o.tol,
            out: o.out,
            svg: o.svg,
            timings: o.timings,
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compute(#[from] quatrange::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn load(config: &RunConfig) -> Result<QMatrix, CliError> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("missing --input".into()))?;
    Ok(parse_matrix(path)?)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(io_err(Path::new("<stdout>")))
        }
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn region_for(a: &QMatrix) -> Option<Region2D> {
    let t = triangularize2(a).ok()?;
    classify_case(&t, CASE_TOL).ok().map(|c| c.region)
}

fn sampled_section(a: &QMatrix, config: &RunConfig) -> Result<Section2D, CliError> {
    Ok(section_plus(&sample_range(a, config.samples, config.seed))?)
}

/// Runs one subcommand. `Ok(false)` means a verification failed.
pub fn execute(command: &Command, config: &RunConfig) -> Result<bool, CliError> {
    match command {
        Command::Demo { name } => return demo(name, config),
        Command::Verify => {
            let a = load(config)?;
            let subject = config.input.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
            let report = run_verify(&a, &subject, config);
            write_out(config.out.as_deref(), &to_json(&report))?;
            return Ok(report.pass);
        }
        _ => {}
    }
    let a = load(config)?;
    if a.dim() == 0 {
        return Err(CliError::Usage("matrix has dimension 0".into()));
    }
    match command {
        Command::Spectrum => {
            let r = verify_spectrum(&a)?;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "values": r.spectrum.values,
                "multiplicities": r.spectrum.multiplicities,
                "checks": r.checks,
                "pass": r.pass,
            });
            write_out(config.out.as_deref(), &to_json(&doc))?;
            Ok(r.pass)
        }
        Command::Radius => {
            let w = numerical_radius(&a, config.angles)?;
            let norm = operator_norm(&a)?;
            let (lb, x) = radius_lower_bound(&a, config.samples, config.seed, 200)?;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "w": w,
                "norm": norm,
                "lower_bound": lb,
                "lower_bound_witness": x,
            });
            write_out(config.out.as_deref(), &to_json(&doc))?;
            Ok(true)
        }
        Command::Norm => {
            let norm = operator_norm(&a)?;
            let sq = operator_norm(&a.matmul(&a)?)?;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "norm": norm,
                "square_norm": sq,
                "frobenius": a.frobenius_norm(),
            });
            write_out(config.out.as_deref(), &to_json(&doc))?;
            Ok(true)
        }
        Command::Section => {
            let section = sampled_section(&a, config)?;
            match &config.out {
                Some(p) => emit_csv(&section, p).map_err(io_err(p))?,
                None => emit::write_csv(&section.points, std::io::stdout().lock())
                    .map_err(io_err(Path::new("<stdout>")))?,
            }
            if let Some(svg) = &config.svg {
                let region = if a.dim() == 2 { region_for(&a) } else { None };
                emit_svg(&section, region.as_ref(), svg).map_err(io_err(svg))?;
            }
            Ok(true)
        }
        Command::Classify => {
            let t = triangularize2(&a)?;
            let class = classify_case(&t, CASE_TOL)?;
            let section = sampled_section(&a, config)?;
            let slack = config.tol.unwrap_or(quatrange::twobytwo::CONTAINMENT_TOL);
            let outside = section
                .points
                .iter()
                .map(|&z| class.region.distance(z))
                .fold(0.0, f64::max);
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "case": class.case,
                "z1": t.z1,
                "z2": t.z2,
                "abs_p": t.p.norm(),
                "region": class.region,
                "flagged": class.flagged,
                "note": class.note,
                "samples": section.points.len(),
                "max_outside": outside,
                "containment_tol": slack,
                "contained": outside <= slack,
            });
            write_out(config.out.as_deref(), &to_json(&doc))?;
            if let Some(svg) = &config.svg {
                emit_svg(&section, Some(&class.region), svg).map_err(io_err(svg))?;
            }
            Ok(outside <= slack)
        }
        Command::Verify | Command::Demo { .. } => unreachable!(),
    }
}

fn demo(name: &str, config: &RunConfig) -> Result<bool, CliError> {
    let report = run_demo(name, config).ok_or_else(|| {
        CliError::Usage(format!("unknown demo \"{name}\"; available: {}", demo_names().join(", ")))
    })?;
    let text = to_json(&report);
    match &config.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io_err(dir))?;
            let a = demo::demo_matrix(name).expect("registered");
            let section = sampled_section(&a, config)?;
            let region = if a.dim() == 2 { region_for(&a) } else { None };
            let json_path = dir.join(format!("{name}.json"));
            std::fs::write(&json_path, &text).map_err(io_err(&json_path))?;
            let csv = dir.join(format!("{name}.csv"));
            emit_csv(&section, &csv).map_err(io_err(&csv))?;
            let svg = dir.join(format!("{name}.svg"));
            emit_svg(&section, region.as_ref(), &svg).map_err(io_err(&svg))?;
        }
        None => write_out(None, &text)?,
    }
    Ok(report.pass)
}

/// Parses `args` and runs; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::try_from(cli.opts).and_then(|config| execute(&cli.command, &config));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
