//! `sperner`: bounds, constructions, integer programs, table scans and
//! verification for Sperner partition systems.
//!
//! Exit codes: 0 success, 1 verification or parse failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sperner_core::construction::Case;
use sperner_core::ip::Variant;

mod asym;
mod bounds;
mod construct;
mod failure;
mod ip;
mod output;
mod scan;
mod verify;

use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "sperner", version, about = "Sperner partition systems and (1,1-bar)-detecting arrays")]
struct Cli {
    /// Worker threads for scans and checks (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper and lower bounds on SP(n, k).
    Bounds(BoundsArgs),
    /// Build an explicit system and verify it.
    Construct(ConstructArgs),
    /// Solve one of the structured integer programs.
    Ip(IpArgs),
    /// Reproduce the exact-value table (1) or the explicit-bound table (2).
    Scan(ScanArgs),
    /// Check an SPS, DA or IP dump file.
    Verify(VerifyArgs),
    /// Finite-n diagnostics for the integer programs as n grows.
    Asym(AsymArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

/// File format for written systems.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Sps,
    Da,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct SystemOut {
    /// Write the system here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::Sps)]
    emit: Emit,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest part count for the pairwise Sperner check.
    #[arg(long, default_value_t = sperner_core::verify::SPERNER_PART_LIMIT)]
    check_limit: usize,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Number of groups; with --h selects the group construction.
    #[arg(long, requires = "h")]
    m: Option<u64>,
    /// Group size.
    #[arg(long, requires = "m")]
    h: Option<u64>,
    #[arg(long, default_value = "b")]
    case: Case,
    #[command(flatten)]
    sys: SystemOut,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Solver {
    /// Closed form, then exact, then rounded LP for secB; exact then greedy for secA.
    Auto,
    Greedy,
    Closed,
    Exact,
    Lp,
}

#[derive(Args, Debug)]
struct IpArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    k: u64,
    /// Defaults to the class matching n mod 2k.
    #[arg(long)]
    variant: Option<Variant>,
    #[arg(long, value_enum, default_value_t = Solver::Auto)]
    solver: Solver,
    /// Branch-and-bound node budget.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, default_value_t = sperner_core::ip::DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,
    #[arg(long, default_value_t = sperner_core::ip::DEFAULT_LP_LIMIT)]
    lp_limit: usize,
    /// Write the instance and solution in the IP dump format.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    sys: SystemOut,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// 1: parameters where the construction meets the upper bound; 2: explicit bounds for n = 2k + r.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    table: u8,
    #[arg(long, default_value_t = 1000)]
    n_max: u64,
    /// Part size for table 1.
    #[arg(long, default_value_t = 2)]
    c: u64,
    #[arg(long, default_value_t = 3)]
    r_min: u64,
    #[arg(long, default_value_t = 10)]
    r_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    path: PathBuf,
    /// Largest part count for pairwise checks.
    #[arg(long, default_value_t = sperner_core::verify::SPERNER_PART_LIMIT)]
    check_limit: usize,
}

#[derive(Args, Debug)]
struct AsymArgs {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    n_max: u64,
    #[arg(long, default_value_t = 0)]
    n_min: u64,
    #[arg(long, default_value_t = sperner_core::ip::DEFAULT_LP_LIMIT)]
    lp_limit: usize,
    /// Skip the LP column.
    #[arg(long)]
    no_lp: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Failure::Usage("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start {w} workers: {e}")))?;
    }
    match cli.command {
        Command::Bounds(a) => bounds::run(&a),
        Command::Construct(a) => construct::run(&a),
        Command::Ip(a) => ip::run(&a),
        Command::Scan(a) => scan::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Asym(a) => asym::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
