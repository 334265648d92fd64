//! `bicat`: verification, enumeration and realization of internal
//! bicategory data in groups, plus the Mal'tsev and path checks.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bicat_core::bicat_data::Alpha2;

#[derive(Debug, Parser)]
#[command(name = "bicat", version, about = "Checks internal bicategories in groups")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the parallel checks. Defaults to one per core.
    #[arg(long, global = true, env = "BICAT_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON with a fixed key order
    Machine,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check conditions (i)-(viii) on a structure file
    Verify { file: PathBuf },

    /// Enumerate every valid structure on a pair of groups
    Enumerate(EnumerateArgs),

    /// Build the cell tables of a structure (or extended) file
    Realize(RealizeArgs),

    /// Checks on group triples (A, s, t)
    #[command(subcommand)]
    Maltsev(MaltsevCommand),

    /// Path-space example
    #[command(subcommand)]
    Path(PathCommand),
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Group file, or `catalog:<name>` (Z1..Zn, V4, S3, D4, Q8, ...)
    #[arg(long)]
    pub x: String,

    #[arg(long)]
    pub b: String,

    /// Only s = t = lambda = rho = id.
    #[arg(long)]
    pub crossed_modules: bool,

    /// Write one structure file per result into this directory.
    #[arg(long)]
    pub dump: Option<PathBuf>,

    /// Largest number of candidates any search layer may hold.
    #[arg(long, default_value_t = 50_000_000)]
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    SRhoLambda,
    SRhoLambdaT,
    TwoCell,
}

impl From<Variant> for Alpha2 {
    fn from(v: Variant) -> Self {
        match v {
            Variant::SRhoLambda => Alpha2::SRhoLambda,
            Variant::SRhoLambdaT => Alpha2::SRhoLambdaT,
            Variant::TwoCell => Alpha2::TwoCell,
        }
    }
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    pub file: PathBuf,

    /// Run the full axiom verifier on the result.
    #[arg(long)]
    pub check_axioms: bool,

    /// Reading of the middle associator component.
    #[arg(long, value_enum, default_value_t = Variant::TwoCell)]
    pub variant: Variant,

    /// Write the cell tables to this file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum MaltsevCommand {
    /// (P1) and its simplified form
    P1 { file: PathBuf },
    /// The triple as an internal groupoid, with round trips and associativity
    Equiv(EquivArgs),
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    pub file: PathBuf,

    /// Constrained tuples to check before switching to a seeded sample.
    #[arg(long, default_value_t = bicat_core::maltsev::DEFAULT_TUPLE_CAP)]
    pub cap: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
enum PathCommand {
    /// Seeded piecewise-linear paths through the path-space formulas
    Demo(PathArgs),
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,

    /// Samples per path; must be even.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,

    #[arg(long, default_value_t = 100)]
    pub paths: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,

    /// Write the generated paths, one sample vector per line.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: worker count must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Verify { file } => commands::verify(&file),
        Command::Enumerate(args) => commands::enumerate(&args),
        Command::Realize(args) => commands::realize(&args),
        Command::Maltsev(MaltsevCommand::P1 { file }) => commands::maltsev_p1(&file),
        Command::Maltsev(MaltsevCommand::Equiv(args)) => commands::maltsev_equiv(&args),
        Command::Path(PathCommand::Demo(args)) => commands::path_demo(&args),
    };
    match result {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
