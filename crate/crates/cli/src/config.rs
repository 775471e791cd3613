use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const CACHE_ENV: &str = "MZN_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "mzn", version, about = "Exact F-curve intersection numbers and certificates on M_{0,n}")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Pairing-matrix cache directory; MZN_CACHE_DIR takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Largest n accepted.
    #[arg(long, global = true, default_value_t = 10)]
    pub max_n: usize,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    All,
    Kap,
    Keel,
    Knu,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List F-curves in canonical order.
    Fcurves {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Degree of a divisor on an F-curve.
    Intersect {
        #[arg(long)]
        n: usize,
        /// `D[m]:a1,...,an`, `psi:i` or `delta:S`.
        #[arg(long)]
        divisor: String,
        /// `I|J|K|L`, e.g. `1|2,3|4|5`.
        #[arg(long)]
        curve: String,
    },
    /// Coordinates of a divisor or functional in the sl2 basis.
    Expand {
        #[arg(long)]
        n: usize,
        /// `D[m]:a1,...,an`, `psi:i` or `delta:S`.
        #[arg(long, conflicts_with = "functional", required_unless_present = "functional")]
        divisor: Option<String>,
        /// JSON file `{"n":..,"values":[{"curve":..,"value":..}]}`, or `-` for stdin.
        #[arg(long)]
        functional: Option<PathBuf>,
    },
    /// Run a theorem verifier and print its report.
    Verify(VerifyArgs),
    /// Print the pairing matrix in the cache format.
    Pairing {
        #[arg(long)]
        n: usize,
    },
    /// Smith normal form of an integer matrix in `mzn-matrix v1` format.
    Snf {
        /// Matrix file, or `-` for stdin.
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Charkap,
    Charknu,
    Chargen,
    Knudual,
    CharprojCert,
    Cdint,
    PsiExtremal,
    KnuRank,
    Triple,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub theorem: Theorem,
    #[arg(long)]
    pub n: usize,
    /// Index parameter (psi-extremal, triple, charproj-cert).
    #[arg(long)]
    pub i: Option<usize>,
    /// Second index (charproj-cert).
    #[arg(long)]
    pub j: Option<usize>,
    /// Set S for chargen, e.g. `1,2,3,4,5`.
    #[arg(long)]
    pub s: Option<String>,
    /// Set T for chargen.
    #[arg(long)]
    pub t: Option<String>,
    /// Part 1 or 2 (cdint).
    #[arg(long)]
    pub part: Option<u8>,
    /// Largest level tried in cdint part 1.
    #[arg(long, default_value_t = 8)]
    pub m_max: u32,
    /// Knudsen curve for knu-rank; repeatable.
    #[arg(long = "curve")]
    pub curves: Vec<String>,
    /// Use every Knudsen curve (knu-rank).
    #[arg(long)]
    pub all: bool,
}

impl GlobalArgs {
    /// Environment variable, then flag, then the per-user data directory.
    pub fn cache_dir(&self) -> Option<PathBuf> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or_else(|| self.cache_dir.clone())
            .or_else(|| dirs::data_dir().map(|d| d.join("mzn")))
    }
}
