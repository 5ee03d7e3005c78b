//! Command-line front end: construct spaces, verify independence, analyze
//! space files, evaluate lower bounds, and emit tightness reports.
//!
//! Exit codes are a stable contract for scripting:
//!   0 - success (a verified property holds)
//!   1 - semantic failure (independence fails, a bound is violated)
//!   2 - I/O, parse, or argument validation error

mod commands;
mod families;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "kwise",
    version,
    about = "d-wise independent sample spaces: constructions, exact verification, entropy bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sample space from a named family and write it as JSON.
    Construct(ConstructArgs),
    /// Check d-wise independence of a space file, exhaustively and exactly.
    Verify(VerifyArgs),
    /// Print entropies and support statistics of a space file.
    Analyze(AnalyzeArgs),
    /// Evaluate the applicable lower bounds for given parameters.
    Bounds(BoundsArgs),
    /// Sweep a construction family and tabulate achieved vs. bound.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    HadamardSylvester,
    HadamardPaley,
    Pairwise,
    Threewise,
    BchEven,
    BchOdd,
    XorLift,
    Code,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction family.
    #[arg(long, value_enum)]
    family: Family,
    /// Sylvester exponent (order 2^m) or BCH field degree.
    #[arg(long)]
    m: Option<u32>,
    /// Paley prime, congruent to 3 mod 4.
    #[arg(long)]
    q: Option<u64>,
    /// Variable count for --family pairwise.
    #[arg(long)]
    n: Option<u64>,
    /// Exponent for --family threewise (n = 2^l).
    #[arg(long)]
    l: Option<u32>,
    /// BCH error parameter (designed distance 2t+1).
    #[arg(long)]
    t: Option<u32>,
    /// Independence order: of the xor-lift input, or claimed for a code
    /// generator.
    #[arg(long)]
    d: Option<usize>,
    /// Input space file (xor-lift only).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Generator matrix in text form (code only).
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Output sample-space JSON file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Also write the generator/code matrix in text form.
    #[arg(long = "matrix-out", value_name = "FILE")]
    matrix_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sample-space JSON file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Independence order to test.
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Sample-space JSON file.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct BoundsArgs {
    /// Variable count.
    #[arg(long)]
    n: usize,
    /// Independence order (default 2).
    #[arg(long, default_value = "2")]
    d: usize,
    /// Uniform marginal Pr[X_j = 1], written num/den.
    #[arg(long)]
    q: Option<String>,
    /// Explicit comma-separated marginal list, written num/den each.
    #[arg(long = "q-list")]
    q_list: Option<String>,
    /// Max value probability for the finite-outcome bound, written num/den.
    #[arg(long)]
    w: Option<String>,
    /// Alphabet size for the finite-outcome bound.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Sweep values, e.g. `4..6` (inclusive) or `3,7,11`.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    l: Option<String>,
    /// Fixed BCH error parameter for bch-even / bch-odd sweeps.
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(args) => commands::construct(args),
        Command::Verify(args) => commands::verify(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Bounds(args) => commands::bounds(args),
        Command::Report(args) => report::run(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
