//! `discrim`: bounds on minimum-error state discrimination from the command line.
//!
//! Exit codes: 0 success, 2 malformed input or arguments, 3 invariant
//! violation, 4 output could not be written.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discrim::ensemble::{make_four_state, make_three_state, Ensemble, ThreeStateVariant};
use discrim::io::{Diagnostics, RawEnsemble};
use discrim::oracle::OracleOptions;
use discrim::parallel::Execution;
use discrim::report::{bound_report, BoundReport};
use discrim::sweep::{run_sweep, to_csv, to_svg, BoundKind, Family, SweepSpec};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "discrim",
    version,
    about = "Lower bounds and certified optimum for quantum state discrimination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every applicable bound and the oracle bracket as JSON.
    Report(ReportArgs),
    /// Evaluate bounds over a theta grid and write CSV (and optionally SVG).
    Sweep(SweepArgs),
    /// Check an ensemble file and print per-member diagnostics.
    Validate {
        /// Ensemble JSON file.
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    #[value(name = "three_state_original")]
    ThreeStateOriginal,
    #[value(name = "three_state_replaced")]
    ThreeStateReplaced,
    #[value(name = "four_state")]
    FourState,
    #[value(name = "file")]
    File,
}

#[derive(Args)]
struct OracleArgs {
    /// Stop the oracle once dual − primal is at most this.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
}

impl OracleArgs {
    fn options(&self) -> OracleOptions {
        OracleOptions {
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Ensemble JSON file (omit when using a generator family).
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Prior weight for the four-state family: p1 = p3 = q/2, p2 = p4 = (1 − q)/2.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Ensemble JSON file, for `--family file`.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "three_state_original")]
    family: FamilyArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta_min: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    theta_max: f64,
    #[arg(long, default_value_t = 181)]
    points: usize,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Comma-separated subset of entropic, srm, pairwise, helstrom, oracle.
    #[arg(long, value_delimiter = ',', default_value = "entropic,srm,pairwise")]
    bounds: Vec<BoundKind>,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG chart output path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invariant(String),
    Output(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Output(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Invariant(m) | Failure::Output(m) => f.write_str(m),
        }
    }
}

impl From<discrim::Error> for Failure {
    fn from(e: discrim::Error) -> Self {
        if e.is_schema() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Invariant(e.to_string())
        }
    }
}

fn read_raw(path: &Path) -> Result<RawEnsemble, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(RawEnsemble::from_json_str(&text)?)
}

fn load(path: &Path) -> Result<Ensemble, Failure> {
    Ok(read_raw(path)?.into_ensemble()?)
}

fn generate(family: FamilyArg, theta: f64, q: f64) -> Result<Ensemble, Failure> {
    Ok(match family {
        FamilyArg::ThreeStateOriginal => make_three_state(theta, ThreeStateVariant::Original),
        FamilyArg::ThreeStateReplaced => make_three_state(theta, ThreeStateVariant::ReplacedPsi2),
        FamilyArg::FourState => make_four_state(theta, q)?,
        FamilyArg::File => unreachable!("file family is resolved by the caller"),
    })
}

#[derive(Serialize)]
struct ReportOutput {
    #[serde(flatten)]
    report: BoundReport,
    diagnostics: Diagnostics,
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let e = match (&args.input, args.family) {
        (Some(path), None | Some(FamilyArg::File)) => load(path)?,
        (None, Some(FamilyArg::File)) | (None, None) => {
            return Err(Failure::Usage(
                "give an ensemble file or a generator --family".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "give either an ensemble file or a generator --family, not both".into(),
            ))
        }
        (None, Some(family)) => generate(family, args.theta, args.q)?,
    };
    let output = ReportOutput {
        report: bound_report(&e, &args.oracle.options())?,
        diagnostics: RawEnsemble::from_ensemble(&e).diagnostics(),
    };
    let json = serde_json::to_string_pretty(&output).expect("report serializes");
    // stdout may be a closed pipe
    let _ = writeln!(std::io::stdout().lock(), "{json}");
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display())))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let family = match args.family {
        FamilyArg::ThreeStateOriginal => Family::ThreeStateOriginal,
        FamilyArg::ThreeStateReplaced => Family::ThreeStateReplaced,
        FamilyArg::FourState => Family::FourState { q: args.q },
        FamilyArg::File => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| Failure::Usage("--family file needs an ensemble file".into()))?;
            Family::File(Box::new(load(path)?))
        }
    };
    let spec = SweepSpec {
        family,
        theta_min: args.theta_min,
        theta_max: args.theta_max,
        points: args.points,
        bounds: args.bounds.clone(),
        oracle: args.oracle.options(),
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let sweep = run_sweep(&spec, exec)?;
    write_file(&args.out, &to_csv(&sweep))?;
    if let Some(svg) = &args.svg {
        write_file(svg, &to_svg(&sweep))?;
    }
    eprintln!("wrote {} rows to {}", sweep.rows.len(), args.out.display());
    Ok(())
}

fn cmd_validate(input: &Path) -> Result<(), Failure> {
    let raw = read_raw(input)?;
    let d = raw.diagnostics();
    println!(
        "label: {}",
        if d.label.is_empty() {
            "(none)"
        } else {
            &d.label
        }
    );
    println!("dim: {}  members: {}", d.dim, d.n_states);
    println!("probability sum: {:.15}", d.probability_sum);
    for m in &d.members {
        println!(
            "member {}: prob={} trace={:.15} min_eigenvalue={:.6e} hermiticity_residual={:.3e}{}",
            m.index,
            m.prob,
            m.trace,
            m.min_eigenvalue,
            m.hermiticity_residual,
            m.vector_norm
                .map(|n| format!(" vector_norm={n:.12}"))
                .unwrap_or_default()
        );
    }
    if !d.ok {
        for p in &d.problems {
            println!("problem: {p}");
        }
        return Err(Failure::Invariant(format!(
            "{} invariant violation(s)",
            d.problems.len()
        )));
    }
    raw.into_ensemble()?;
    println!("OK");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Report(args) => cmd_report(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate { input } => cmd_validate(input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
