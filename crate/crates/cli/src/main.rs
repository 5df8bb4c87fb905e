//! Command-line front end for the `uqsl2` library.
//!
//! Every command prints one JSON document (or CSV where supported) and exits
//! with 0 on success, 1 when a check fails or the computation errors, and 2 on
//! usage errors.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Symbolic,
    Numeric,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Symbolic => "symbolic",
            Mode::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Out {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GrowthGenerator {
    E,
    F,
}

#[derive(Debug, Parser)]
#[command(name = "uqsl2", version, about = "Computer algebra for U_q(sl2) and its h-adic form")]
pub struct Cli {
    /// Coefficient mode: exact rational functions of q, or complex floats.
    #[arg(long, value_enum, default_value_t = Mode::Symbolic, global = true)]
    pub mode: Mode,
    /// Numeric value of q, e.g. `1.1`, `0.3+0.2i`, `exp(1i)`, `root(5)`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Numeric hbar; sets q = e^hbar.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hbar: Option<String>,
    /// Numeric tolerance.
    #[arg(long, env = "UQSL2_TOL", default_value_t = 1e-10, global = true)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Out::Json, global = true)]
    pub out: Out,
    /// Seed for randomized steps.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// PBW normal form of an expression.
    Normalize { expr: String },
    /// Normal form of `[x, y]`.
    Commutator { x: String, y: String },
    /// Build the Laurent witness certificate for `E^m`.
    WitnessBuild {
        m: u32,
        #[arg(long, default_value_t = uqsl2::witness::DEFAULT_MAX_M)]
        max_m: u32,
    },
    /// Re-check a witness certificate (a file, or `-` for stdin).
    WitnessVerify { file: PathBuf },
    /// Matrices of a module given by labels (`n,eps` or `n,k,eps`, `;`-separated for sums).
    RepBuild(RepArgs),
    /// Defining relations as matrix identities.
    RepCheck(RepArgs),
    /// Dimension of the commutant.
    Commutant(RepArgs),
    /// Scalar by which the Casimir acts.
    Casimir(RepArgs),
    /// Split a module with H into simple modules.
    Decompose {
        #[command(flatten)]
        rep: RepArgs,
        /// Conjugate by a random invertible integer matrix first.
        #[arg(long)]
        conjugate: bool,
    },
    /// Images of an element in the blocks `T(n, eps)`, `n <= stage`.
    Envelope {
        expr: String,
        #[arg(long, default_value_t = 2)]
        stage: u32,
    },
    /// Rank of the evaluation map on monomials of bounded degree.
    SeparationRank {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        stage: u32,
        /// Report ranks at every stage up to `stage`.
        #[arg(long)]
        profile: bool,
    },
    /// Truncated Verma module.
    VermaBuild(VermaArgs),
    /// Indices where the truncated Verma module has an invariant tail.
    VermaScan(VermaArgs),
    /// Operator norms of Verma truncations.
    VermaNorms {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lam: String,
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        sizes: Vec<usize>,
    },
    /// Conjugation growth of E (by K) or F (by K^-1) in `T(n, eps)`.
    Growth {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        eps: i8,
        #[arg(long, value_enum, default_value_t = GrowthGenerator::E)]
        generator: GrowthGenerator,
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Centrality of E^s, F^s, K^s at q = exp(2 pi i / d).
    CenterCheck {
        #[arg(long)]
        d: u32,
    },
    /// Evidence for every regime of the representation tables.
    TableAudit {
        #[arg(long, allow_hyphen_values = true)]
        q_off: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        q_unit: Option<String>,
        #[arg(long)]
        root: Option<u32>,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
}

#[derive(Debug, clap::Args)]
pub struct RepArgs {
    /// Labels, e.g. `2,1` or `1,0,1;2,-1,-1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "from")]
    pub rep: Option<String>,
    /// JSON file with matrices `e`, `f`, `k` (and optionally `h: {u, v}`).
    #[arg(long)]
    pub from: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct VermaArgs {
    /// Highest weight; a rational function of q in symbolic mode.
    #[arg(long, allow_hyphen_values = true)]
    pub lam: String,
    #[arg(long)]
    pub size: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] uqsl2::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<uqsl2::expr::ParseError> for CliError {
    fn from(e: uqsl2::expr::ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

// A closed pipe downstream is not an error worth reporting.
fn emit(report: &Report, out: Out) {
    use std::io::Write;
    let text = match (out, &report.csv) {
        (Out::Csv, Some(csv)) => csv.clone(),
        _ => format!("{}\n", serde_json::to_string_pretty(report).expect("reports serialize")),
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(report) => {
            emit(&report, cli.out);
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
