use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eddeg_core::MonomialOrder;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "eddeg", version, about = "Exact Euclidean distance degrees")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalOpts {
    /// Independent generic trials per count (at least 3).
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,

    /// Base seed; trial k uses seed + k.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Prime modulus; the trials alternate between it and the next smaller prime.
    #[arg(long, global = true, env = "EDDEG_MODULUS")]
    pub modulus: Option<u64>,

    /// Count over the rationals instead of prime fields.
    #[arg(long, global = true, conflicts_with = "modulus")]
    pub rational: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Monomial order for printed bases (degrevlex, lex, block(k)).
    #[arg(long, global = true, default_value = "degrevlex")]
    pub order: MonomialOrder,

    /// Run trials one after another instead of in parallel.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ED degree of an implicitly given variety.
    Implicit {
        file: PathBuf,
        /// Cross-check the stated codimension against the ideal.
        #[arg(long)]
        check_codim: bool,
    },
    /// ED degree of a parametrized variety.
    Parametric { file: PathBuf },
    /// Critical points of a linear function on the smooth locus.
    LinearCount {
        file: PathBuf,
        /// Fixed coefficients (comma separated); random per trial if omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coefficients: Option<Vec<String>>,
    },
    /// Conormal ideal of an implicit variety and its dimension.
    Conormal { file: PathBuf },
    /// ED degree of the affine multiview variety of n generic cameras.
    Multiview {
        n: usize,
        /// Required for n >= 4.
        #[arg(long)]
        long: bool,
        /// Recount every trial in a second random chart of P^3.
        #[arg(long)]
        verify_second_chart: bool,
    },
    /// Euler characteristic chain of the blown-up compactification.
    Euler {
        /// Polynomials in n instead of numbers.
        #[arg(long, conflicts_with_all = ["n", "range"])]
        symbolic: bool,
        /// A single n.
        #[arg(long, conflicts_with = "range")]
        n: Option<u64>,
        /// Inclusive range a..b.
        #[arg(long, default_value = "2..10")]
        range: String,
    },
    /// Milnor number of a polynomial, or the fiber Euler characteristic of a model.
    Milnor {
        /// Polynomial; omit when --model is given.
        #[arg(required_unless_present = "model", allow_hyphen_values = true)]
        equation: Option<String>,
        #[arg(long, default_value = "x,y,z", value_delimiter = ',')]
        vars: Vec<String>,
        /// Point (comma separated rationals); origin by default.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<String>>,
        /// smooth, node, umbrella or triple.
        #[arg(long, conflicts_with = "equation")]
        model: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Implicit { .. } => "implicit",
            Command::Parametric { .. } => "parametric",
            Command::LinearCount { .. } => "linear-count",
            Command::Conormal { .. } => "conormal",
            Command::Multiview { .. } => "multiview",
            Command::Euler { .. } => "euler",
            Command::Milnor { .. } => "milnor",
        }
    }
}

/// `a..b` or `a..=b`, both inclusive.
pub fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("range `{text}` is not of the form a..b"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    if a > b {
        return Err(format!("empty range `{text}`"));
    }
    Ok((a, b))
}
