use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "stabrank", version, about = "Stabilizer-rank experiments over F2^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Least stabilizer rank of a magic target, or residual of a given decomposition.
    Rank(RankArgs),
    /// Collision witness for a decomposition, or a check of a supplied pair.
    Witness(WitnessArgs),
    /// Threshold / restriction / low-degree pipeline.
    Pipeline(PipelineArgs),
    /// Central binomial mass and shifted-layer ratio.
    Binomial(BinomialArgs),
    /// All stabilizer states on n qubits, canonical order.
    Enumerate(EnumerateArgs),
    /// Low-degree one-sided approximation of a random affine subspace.
    Rs(RsArgs),
    /// Random decomposition fixture.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    H,
    T,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessMode {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Omit the `volatile` block (timestamp and timing).
    #[arg(long)]
    pub no_volatile: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct RankArgs {
    #[arg(long, value_enum, default_value = "t")]
    pub target: Target,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub r_max: usize,
    /// Exact for H and T, float for R unless given.
    #[arg(long, value_enum)]
    pub mode: Option<NumericMode>,
    /// Allow the n = 4 enumeration (slow).
    #[arg(long)]
    pub allow_n4: bool,
    /// Decomposition file to verify against the target.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    pub verify_only: bool,
    /// Also write the certificate decomposition to this path.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct WitnessArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: WitnessMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = stabrank::rankops::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = stabrank::rankops::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Verify the pair given by --y and --z instead of searching.
    #[arg(long, requires_all = ["y", "z"])]
    pub check: bool,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct PipelineArgs {
    #[arg(long, value_enum, default_value = "h")]
    pub target: Target,
    #[arg(long, default_value_t = 48)]
    pub n: usize,
    /// L2 radius of the sparse perturbation, `a/b` or decimal; 0 for the exact target.
    #[arg(long, default_value = "1/20")]
    pub delta: String,
    #[arg(long, default_value_t = 1024)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value = "1/100")]
    pub eps: String,
    #[arg(long, default_value = "1/100")]
    pub gamma: String,
    #[arg(long, default_value_t = stabrank::approx::DEFAULT_RS_RETRIES)]
    pub retries: usize,
    /// Complement f_ψ before the layer report.
    #[arg(long)]
    pub negate: bool,
    /// Run on a decomposition file instead of the perturbed target.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct BinomialArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Shift constant; may be negative.
    #[arg(long = "C", short = 'C', default_value_t = 1, allow_hyphen_values = true)]
    pub c: i64,
    /// `H`, `R`, `a/b` or a decimal.
    #[arg(long, default_value = "H")]
    pub p: String,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub allow_n4: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct RsArgs {
    #[arg(long, default_value_t = 12)]
    pub m: usize,
    #[arg(long, default_value_t = 5)]
    pub codim: usize,
    #[arg(long, default_value_t = 8)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = stabrank::approx::DEFAULT_RS_RETRIES)]
    pub retries: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 4)]
    pub max_codim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// The constant function 1 instead of a random decomposition.
    #[arg(long)]
    pub constant_one: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub common: Common,
}
