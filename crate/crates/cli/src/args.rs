use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Fixed default master seed; runs are reproducible unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 0x5EED_2014;

#[derive(Debug, Parser)]
#[command(
    name = "btmbqc",
    version,
    about = "Blind topological MBQC simulator and threshold harness"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Master seed for every random stream [default: 1592598548]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output artifacts; nothing is written when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (falls back to BTMBQC_WORKERS, then all cores)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output format for tabular results
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// JSON config file (sweep config for `threshold sweep`)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Global {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an RHG lattice and print it as a JSON document
    Lattice(LatticeArgs),
    /// Run the blind protocol
    #[command(subcommand)]
    Protocol(ProtocolCommand),
    /// Branch-exact checks of the decoration chain
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Exact and statistical blindness audits
    Blindness(BlindnessArgs),
    /// Noise rates, Monte-Carlo validation and the loss model
    #[command(subcommand)]
    Noise(NoiseCommand),
    /// Decode a face-error set on a lattice document
    Decode(DecodeArgs),
    /// Threshold sweeps
    #[command(subcommand)]
    Threshold(ThresholdCommand),
    /// Iterate a magic-state distillation recursion
    Distill(DistillArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Open,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Cubic size L (ignored when --sizes is given)
    #[arg(long, default_value_t = 2)]
    pub size: usize,
    /// Per-axis sizes, e.g. 3,3,5
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
    /// Attach the two-qubit chain to every site
    #[arg(long)]
    pub decorate: bool,
    /// Include the CZ schedule (implies --decorate)
    #[arg(long)]
    pub schedule: bool,
}

#[derive(Debug, Subcommand)]
pub enum ProtocolCommand {
    /// Run repeated blind sessions, write transcripts and an outcome histogram
    Run(ProtocolRunArgs),
}

#[derive(Debug, Args)]
pub struct ProtocolRunArgs {
    /// Measurement pattern JSON file
    #[arg(long, conflicts_with = "phi")]
    pub pattern: Option<PathBuf>,
    /// Linear chain with these angles in units of π/4, e.g. 1,0,2
    #[arg(long, value_delimiter = ',')]
    pub phi: Option<Vec<u8>>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    X,
    Y,
    T,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    HostFirst,
    HostLast,
}

#[derive(Debug, Subcommand)]
pub enum GadgetCommand {
    /// Compare chain measurements against direct single-qubit measurements
    Verify(GadgetVerifyArgs),
}

#[derive(Debug, Args)]
pub struct GadgetVerifyArgs {
    /// All four bases
    #[arg(long, conflicts_with = "basis")]
    pub all: bool,
    #[arg(long, value_enum, ignore_case = true)]
    pub basis: Option<BasisArg>,
    /// Largest environment degree
    #[arg(long, default_value_t = 4)]
    pub max_env: usize,
    #[arg(long, value_enum, default_value_t = OrientationArg::HostFirst)]
    pub orientation: OrientationArg,
}

#[derive(Debug, Args)]
pub struct BlindnessArgs {
    /// Protocol runs for the statistical audit
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Length of the linear test pattern
    #[arg(long, default_value_t = 6)]
    pub qubits: usize,
    /// Point prior at this angle (units of π/4) instead of uniform
    #[arg(long)]
    pub point: Option<u8>,
}

#[derive(Debug, Subcommand)]
pub enum NoiseCommand {
    /// Closed-form first-order rates
    Rates(RatesArgs),
    /// Monte-Carlo check of the closed-form rates
    Validate(ValidateArgs),
    /// Chain loss and postselection overhead
    Loss(LossArgs),
    /// Effective error rate with and without blind rotations
    Theta(ThetaArgs),
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[arg(long = "pP", default_value_t = 4.3e-3)]
    pub p_prep: f64,
    #[arg(long = "pM", default_value_t = 4.3e-3)]
    pub p_meas: f64,
    #[arg(long = "p2", default_value_t = 4.3e-3)]
    pub p2: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    /// Uniform error rates to check
    #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-2])]
    pub p: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct LossArgs {
    #[arg(long, default_value_t = 0.01)]
    pub ploss: f64,
    #[arg(long, default_value_t = 3)]
    pub distance: usize,
    /// Monte-Carlo chains
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long, default_value_t = 1e-2)]
    pub p: f64,
    #[arg(long, default_value_t = 200_000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// JSON array of face coordinates [x, y, z]
    #[arg(long)]
    pub errors: PathBuf,
    /// Lattice document from `btmbqc lattice`
    #[arg(long)]
    pub lattice: PathBuf,
    /// Only this axis's plane counts as a logical cut
    #[arg(long)]
    pub axis: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ThresholdCommand {
    /// Failure-rate curves and their crossing
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    /// pP = pM = p2 = p
    Bulk,
    /// pP = 10p, pM = p2 = p
    Prep10,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Built-in scenario, used when --config is absent
    #[arg(long, value_enum, default_value_t = ScenarioArg::Bulk)]
    pub scenario: ScenarioArg,
    /// Override trials per point
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Y,
    T,
}

#[derive(Debug, Args)]
pub struct DistillArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub kind: KindArg,
    #[arg(long)]
    pub eps0: f64,
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    /// Error floor added at every level
    #[arg(long, default_value_t = 0.0)]
    pub eps_top: f64,
}
