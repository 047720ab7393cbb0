//! The `mqo` command line.
//!
//! Exit status is 0 on success, 1 when a self-check fails or output cannot be
//! written, and 2 for usage errors and invalid input.

mod report;
mod selfcheck;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::instances::{beta_optimum_check, gen_join_workload, gen_planted_cover, planted_bound};
use crate::optimize::{run as run_algorithm, Algorithm, RunOptions};
use crate::workload::Workload;

pub use report::ReportFormat;

#[derive(Debug, Parser)]
#[command(
    name = "mqo",
    version,
    about = "Multi-query optimization by ratio-greedy materialization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choose nodes to materialize for one workload.
    Optimize(OptimizeArgs),
    /// Run every algorithm on one workload and tabulate the results.
    Compare(CompareArgs),
    /// Write a generated workload or coverage instance.
    Gen(GenArgs),
    /// Check the bundled example and the fast property suites.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Marginal,
    Lazy,
    Roy,
    Exhaustive,
    None,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Marginal => Algorithm::Marginal,
            AlgoArg::Lazy => Algorithm::Lazy,
            AlgoArg::Roy => Algorithm::Roy,
            AlgoArg::Exhaustive => Algorithm::Exhaustive,
            AlgoArg::None => Algorithm::None,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Cardinality cap for the ratio-greedy algorithms.
    #[arg(long)]
    pub k: Option<usize>,
    /// Drop candidates whose ratio falls to 1 or below.
    #[arg(long, overrides_with = "no_prune")]
    pub prune: bool,
    #[arg(long = "no-prune", overrides_with = "prune")]
    pub no_prune: bool,
    /// Echoed in reports; the optimizers themselves are deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            k: self.k,
            prune: self.prune && !self.no_prune,
        }
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    pub workload: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Marginal)]
    pub algo: AlgoArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Include the per-iteration trace.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub workload: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    JoinWorkload,
    PlantedCover,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// join-workload: number of queries.
    #[arg(long, default_value_t = 3)]
    pub queries: usize,
    /// join-workload: relations per query.
    #[arg(long, default_value_t = 4)]
    pub relations: usize,
    /// join-workload: fraction of each query drawn from the shared core.
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    /// planted-cover: ground set size.
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    /// planted-cover: size of the planted cover.
    #[arg(long, default_value_t = 3)]
    pub l: usize,
    /// planted-cover: random sets beyond the planted blocks.
    #[arg(long, default_value_t = 0)]
    pub extra: usize,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    /// Workload to check instead of the bundled example.
    pub workload: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Failure of a command, with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Workload { .. }
            | Error::Json(_)
            | Error::Io { .. }
            | Error::InvalidArgument(_)
            | Error::MissingCost { .. }
            | Error::TooLarge { .. }
            | Error::Domain(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let result = match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    result.map_err(|message| Failure { code: 1, message })
}

fn optimize(args: &OptimizeArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let workload = Workload::from_path(&args.workload)?;
    let prepared = workload.prepare()?;
    let outcome = run_algorithm(&prepared, args.algo.into(), args.solver.options())?;
    let text = report::optimize(
        &args.workload,
        &prepared,
        &outcome,
        &args.solver,
        args.trace,
        args.output.report,
    )?;
    emit(args.output.out.as_ref(), &text, stdout)
}

fn compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let workload = Workload::from_path(&args.workload)?;
    let mut rows = Vec::new();
    for algorithm in Algorithm::ALL {
        let prepared = workload.prepare()?;
        if algorithm == Algorithm::Exhaustive
            && prepared.benefit.universe().len() > crate::solvers::EXHAUSTIVE_MAX_LIMIT
        {
            continue;
        }
        let mut opts = args.solver.options();
        if !algorithm.uses_cap() {
            opts.k = None;
        }
        rows.push(run_algorithm(&prepared, algorithm, opts)?);
    }
    let text = report::compare(&rows, args.output.report)?;
    emit(args.output.out.as_ref(), &text, stdout)
}

fn generate(args: &GenArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let text = match args.kind {
        GenKind::JoinWorkload => gen_join_workload(args.queries, args.relations, args.overlap, args.seed)?.to_json(),
        GenKind::PlantedCover => {
            let inst = gen_planted_cover(args.n, args.l, args.extra, args.gamma, args.seed)?;
            let beta = beta_optimum_check(args.gamma)?;
            let bound = planted_bound(&inst)?;
            let _ = writeln!(
                stderr,
                "beta* = {beta:.6} (ln(1+gamma) = {:.6}), guarantee on the planted optimum = {:.6}",
                args.gamma.ln_1p(),
                bound.factor
            );
            inst.to_json()
        }
    };
    emit(args.out.as_ref(), &(text + "\n"), stdout)
}

/// Parses `args` and runs the command, returning the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            if err.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return err.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Optimize(args) => optimize(args, stdout),
        Command::Compare(args) => compare(args, stdout),
        Command::Gen(args) => generate(args, stdout, stderr),
        Command::Selfcheck(args) => selfcheck::run(args, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}
