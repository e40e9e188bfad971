//! `fondgr`: compile temporal goals into FOND problems, plan, recognize
//! goals from observations and evaluate recognition datasets.

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fondgr::automata::DEFAULT_STATE_CAP;
use fondgr::datasets::{BundledDomain, Family};
use fondgr::logic::Dialect;
use fondgr::planner::SolutionKind;

#[derive(Parser, Debug)]
#[command(name = "fondgr", version, about)]
struct Cli {
    /// Worker threads for per-goal and per-problem parallelism.
    #[arg(long, short = 'j', global = true)]
    jobs: Option<usize>,
    /// Largest automaton built for a goal formula.
    #[arg(long, global = true, env = "FONDGR_STATE_CAP", default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a temporal goal into a FOND domain and problem.
    Compile(CompileArgs),
    /// Find a policy for a FOND problem, optionally for a temporal goal.
    Plan(PlanArgs),
    /// Rank goal hypotheses given observed actions.
    Recognize(RecognizeArgs),
    /// Evaluate recognition over a dataset.
    Eval(EvalArgs),
    /// Generate a recognition dataset over bundled domains.
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
struct GoalArgs {
    /// Goal formula, e.g. "F(vAt(51))".
    #[arg(long)]
    goal: Option<String>,
    #[arg(long, value_enum, default_value_t = DialectArg::Ltlf)]
    dialect: DialectArg,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum DialectArg {
    Ltlf,
    Ppltl,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Self {
        match d {
            DialectArg::Ltlf => Dialect::Ltlf,
            DialectArg::Ppltl => Dialect::Ppltl,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    StrongCyclic,
    Strong,
}

impl From<ModeArg> for SolutionKind {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::StrongCyclic => SolutionKind::StrongCyclic,
            ModeArg::Strong => SolutionKind::Strong,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Precision {
    F32,
    F64,
}

#[derive(Args, Debug)]
struct CompileArgs {
    domain: PathBuf,
    problem: PathBuf,
    #[arg(long)]
    goal: String,
    #[arg(long, value_enum, default_value_t = DialectArg::Ltlf)]
    dialect: DialectArg,
    /// Directory receiving `domain.pddl` and `problem.pddl`.
    #[arg(long, short, default_value = ".")]
    out_dir: PathBuf,
    /// Emit ground automaton-state fluents instead of lifted ones.
    #[arg(long)]
    ground: bool,
}

#[derive(Args, Debug)]
struct PlanArgs {
    domain: PathBuf,
    problem: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::StrongCyclic)]
    mode: ModeArg,
    #[command(flatten)]
    goal: GoalArgs,
    /// Policy output path; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RecognizeArgs {
    problem: PathBuf,
    /// Rank after every observation instead of once at the end.
    #[arg(long)]
    online: bool,
    #[arg(long, value_enum, default_value_t = ModeArg::StrongCyclic)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    loop_bound: usize,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    dataset: PathBuf,
    /// Directory receiving `metrics.json` and `table.txt`; defaults to the
    /// dataset's directory.
    #[arg(long, short)]
    out_dir: Option<PathBuf>,
    /// Observability levels to evaluate.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    /// Recorded in the report.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::StrongCyclic)]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    loop_bound: usize,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Bundled domains; repeat or separate with commas.
    #[arg(long, required = true, value_delimiter = ',')]
    domain: Vec<BundledDomain>,
    /// Goal families; repeat or separate with commas.
    #[arg(long, required = true, value_delimiter = ',')]
    family: Vec<Family>,
    /// Problems per (domain, family).
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    hypotheses: usize,
    /// Draws per problem before giving up.
    #[arg(long, default_value_t = 300)]
    budget: usize,
    #[arg(long, short)]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(failure::EXIT_INTERNAL);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
