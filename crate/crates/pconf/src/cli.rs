//! Argument parsing and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, BoundKindArg, BoundParams, Domain, SolveSpec, Target};
use crate::error::{Result, RunError};
use crate::figures::{figure, Figure};
use crate::record::{Record, Table};
use crate::sweep::{sweep, Axis, SweepSpec};
use crate::verify::{verify, Suite};

/// Directory that relative `--out` paths (and default file names) resolve
/// against.
pub const OUT_DIR_VAR: &str = "PCONF_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "pconf", version, about = "Extremal maps of finite distortion between hyperbolic annuli")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format; figures and sweeps are always CSV.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout. Relative paths resolve
    /// against $PCONF_OUT_DIR when it is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximal collar about a geodesic of length ELL.
    #[command(allow_negative_numbers = true)]
    Collar {
        #[arg(long)]
        ell: f64,
    },
    /// Solve for the extremal map of a collar onto a ring.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Evaluate one of the energy bounds.
    #[command(allow_negative_numbers = true)]
    Bound(BoundArgs),
    /// Run property suites; exit 1 when any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace the tolerance of every numerical comparison.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Energies over an (ell, modulus ratio) grid of maximal collars.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Data for one of the plots.
    Figure {
        #[arg(value_enum)]
        name: Figure,
    },
    /// The punctured disk example: finite Euclidean, divergent hyperbolic energy.
    IntroExample,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub ell: f64,
    /// Half the scaled collar width; defaults to the maximal collar.
    #[arg(long, conflicts_with = "delta")]
    pub theta: Option<f64>,
    /// Hyperbolic collar radius; defaults to the maximal collar.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Target modulus m_Omega.
    #[arg(long, required_unless_present = "mod_ratio", conflicts_with = "mod_ratio")]
    pub mod_target: Option<f64>,
    /// Target modulus as a multiple of the collar modulus.
    #[arg(long)]
    pub mod_ratio: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Also run the small-ell approximation and report the energy ratio.
    #[arg(long)]
    pub approx: bool,
    /// Number of sample intervals in the CSV table.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub kind: BoundKindArg,
    #[arg(long)]
    pub ell: f64,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub g: u32,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub mod_target: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.01)]
    pub ell_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub ell_max: f64,
    #[arg(long, default_value_t = 20)]
    pub ell_n: usize,
    /// Space ell geometrically.
    #[arg(long)]
    pub log_ell: bool,
    #[arg(long, default_value_t = 0.5)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 7)]
    pub ratio_n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
}

enum Output {
    Record(Record),
    Table(Table),
}

/// Runs a parsed command and writes its output.
pub fn run(cli: &Cli) -> Result<()> {
    let fmt = cli.output.format;
    let (out, default_name, failures) = match &cli.command {
        Command::Collar { ell } => (Output::Record(commands::collar(*ell)?), "collar".to_string(), None),
        Command::Solve(a) => {
            let domain = match (a.theta, a.delta) {
                (Some(t), _) => Domain::Theta(t),
                (None, Some(d)) => Domain::Delta(d),
                _ => Domain::Maximal,
            };
            let target = match (a.mod_target, a.mod_ratio) {
                (Some(m), _) => Target::Modulus(m),
                (None, Some(k)) => Target::Ratio(k),
                _ => return Err(RunError::Usage("solve needs --mod-target or --mod-ratio".into())),
            };
            let spec = SolveSpec { ell: a.ell, domain, target, p: a.p, approx: a.approx };
            let (r, t) = commands::solve(&spec, a.samples)?;
            (pick(fmt, r, t), "solve".into(), None)
        }
        Command::Bound(a) => {
            let bp =
                BoundParams { ell: a.ell, m: a.m, g: a.g, p: a.p, delta: a.delta, mod_target: a.mod_target, a: a.a };
            (Output::Record(commands::bound(a.kind, &bp)?), "bound".into(), None)
        }
        Command::Verify { suite, seed, tol } => {
            if let Some(t) = tol {
                if !(*t > 0.0) {
                    return Err(RunError::Usage(format!("--tol must be positive (got {t})")));
                }
            }
            let rep = verify(*suite, *seed, *tol);
            let failures = (!rep.passed()).then(|| rep.failures());
            (Output::Record(rep.record()), format!("verify-{}", suite.name()), failures)
        }
        Command::Sweep(a) => {
            let spec = SweepSpec {
                ell: Axis { lo: a.ell_min, hi: a.ell_max, n: a.ell_n, log: a.log_ell },
                ratio: Axis { lo: a.ratio_min, hi: a.ratio_max, n: a.ratio_n, log: false },
                p: a.p,
            };
            (Output::Table(sweep(&spec)?), "sweep".into(), None)
        }
        Command::Figure { name } => (Output::Table(figure(*name)?), format!("figure-{}", name.name()), None),
        Command::IntroExample => {
            let (r, t) = commands::intro_example()?;
            (pick(fmt, r, t), "intro-example".into(), None)
        }
    };
    let text = match &out {
        Output::Record(r) if fmt != Some(Format::Csv) => r.to_json(),
        Output::Record(r) => Table::new("record").notes(r.summary_lines()).to_csv(),
        Output::Table(t) => t.to_csv(),
    };
    let ext = if text.starts_with('#') { "csv" } else { "json" };
    write_output(cli.output.out.as_ref(), &format!("{default_name}.{ext}"), &text)?;
    match failures {
        Some(f) => Err(RunError::Verification(f)),
        None => Ok(()),
    }
}

fn pick(fmt: Option<Format>, r: Record, t: Table) -> Output {
    match fmt {
        Some(Format::Csv) => Output::Table(t),
        _ => Output::Record(r),
    }
}

fn write_output(out: Option<&PathBuf>, default_name: &str, text: &str) -> Result<()> {
    let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    let path = match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(&p, text)?;
            eprintln!("wrote {}", p.display());
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
