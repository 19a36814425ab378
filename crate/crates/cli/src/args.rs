use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const SEED_ENV: &str = "TELEPORTRIX_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "teleportrix",
    version,
    about = "Probabilistic teleportation and entanglement swapping over non-maximally entangled pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Teleport one qubit and report every outcome
    Teleport(TeleportArgs),
    /// Entanglement swapping between two pairs
    Swap(SwapArgs),
    /// Classify a teleportation parameter tuple
    Classify(ClassifyArgs),
    /// Tabulate success probability over a grid of |n|
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub output: Format,
    /// Significant digits of every floating-point number in the report (6..=17)
    #[arg(long, default_value_t = 12, allow_hyphen_values = true)]
    pub precision: i64,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for random inputs and sampling
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
pub struct TeleportArgs {
    /// Resource parameter n
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    /// Basis parameter ℓ
    #[arg(long = "l", allow_hyphen_values = true)]
    pub ell: String,
    /// Basis parameter p
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    /// Input amplitude α
    #[arg(
        long,
        allow_hyphen_values = true,
        requires = "beta",
        conflicts_with = "random_input"
    )]
    pub alpha: Option<String>,
    /// Input amplitude β
    #[arg(long, allow_hyphen_values = true, requires = "alpha")]
    pub beta: Option<String>,
    /// Use this many Haar-random inputs instead of --alpha/--beta
    #[arg(long, value_name = "COUNT")]
    pub random_input: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Total shots in sampled mode, split evenly across inputs
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    /// Include every sampled outcome in the JSON report
    #[arg(long)]
    pub per_shot: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapChoiceArg {
    /// ℓ = 1/n*, p = 1/m*, ℓ′ = 1/n, p′ = m
    TwoOutcome,
    /// Take ℓ, p, ℓ′, p′ from the command line
    Explicit,
}

#[derive(Args, Debug)]
pub struct SwapArgs {
    /// First pair parameter m (qubits a, b)
    #[arg(long, allow_hyphen_values = true)]
    pub m: String,
    /// Second pair parameter n (qubits 1, 2)
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    #[arg(long, value_enum, default_value_t = SwapChoiceArg::Explicit)]
    pub choice: SwapChoiceArg,
    /// Measurement basis ℓ on (a, 1)
    #[arg(long = "l", allow_hyphen_values = true)]
    pub ell: Option<String>,
    /// Measurement basis p on (a, 1)
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Analysis basis ℓ′ on (b, 2)
    #[arg(long = "lp", allow_hyphen_values = true)]
    pub ell_prime: Option<String>,
    /// Analysis basis p′ on (b, 2)
    #[arg(long = "pp", allow_hyphen_values = true)]
    pub p_prime: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    #[arg(long = "l", allow_hyphen_values = true)]
    pub ell: String,
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepRegime {
    /// ℓ = n, p = n*
    Probabilistic2,
    /// ℓ = n, p = 0
    Probabilistic1,
    /// swapping two-outcome choice with fixed --m
    SwapTwo,
    /// swapping two-outcome choice with m = n
    SwapThree,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Grid of |n| values, start:stop:step, endpoints inclusive
    #[arg(long)]
    pub n_grid: String,
    #[arg(long, value_enum)]
    pub regime: SweepRegime,
    /// Fixed first-pair parameter for swap-two
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub m: String,
    #[command(flatten)]
    pub common: Common,
}
