use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "noncollide", version, about = "Vicious walkers, Schur functions and noncolliding diffusions")]
pub struct Cli {
    /// Seed for every random draw; echoed into each output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for parallel sampling (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of nonintersecting walks between two configurations.
    Count(CountArgs),
    /// Convert between walk records and tableaux (JSON).
    #[command(subcommand)]
    Tableau(TableauCommand),
    /// Evaluate a Schur function at rational points.
    Schur(SchurArgs),
    /// Determinant of path Green functions on a weighted acyclic graph.
    Lgv(LgvArgs),
    /// Draw nonintersecting walks uniformly.
    SampleWalk(SampleWalkArgs),
    /// Compare the rescaled walk count with its diffusion limit.
    ScalingCheck(ScalingArgs),
    /// Simulate Dyson's Brownian motion.
    SimulateDyson(SimArgs),
    /// Simulate Brownian motions conditioned to stay ordered up to `--t`.
    SimulateInhomogeneous(SimArgs),
    /// Eigenvalue paths of Hermitian matrix-valued Brownian motion.
    SimulateMatrix(MatrixArgs),
    /// Evaluate a transition density or survival probability.
    Density(DensityArgs),
    /// Run the acceptance suite or selected criteria.
    Verify(VerifyArgs),
    /// Drift regression, quadratic variation and Gamma estimate from eigenvalue paths.
    VerifySde(VerifySdeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    /// Determinant of binomial coefficients.
    Determinant,
    /// Enumerate all step matrices.
    Enumerate,
    /// Path-graph determinant.
    Lgv,
    /// Schur principal specialization (canonical starts only).
    Schur,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub start: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub end: Vec<i64>,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = CountMethod::Determinant)]
    pub method: CountMethod,
}

#[derive(Debug, Subcommand)]
pub enum TableauCommand {
    /// Walk record(s) with canonical start to tableau(x).
    FromWalk {
        /// JSON file with one record or an array (default: stdin).
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Tableau(x) to walk record(s).
    ToWalk {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        walkers: usize,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchurMethod {
    Ssyt,
    Bialternant,
    Dualjt,
    Principal,
}

#[derive(Debug, Args)]
pub struct SchurArgs {
    /// Partition parts, e.g. `2,1`; empty for the empty shape.
    #[arg(long, value_delimiter = ',', default_value = "")]
    pub shape: Vec<String>,
    /// Evaluation points as integers or fractions `p/q`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub points: Vec<String>,
    #[arg(long, value_enum, default_value_t = SchurMethod::Ssyt)]
    pub method: SchurMethod,
}

#[derive(Debug, Args)]
pub struct LgvArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sources: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sinks: Vec<String>,
    /// Also test compatibility and sum nonintersecting tuples by brute force.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WalkSampler {
    /// Exact conditioned sampler.
    Exact,
    /// Free walks until one survives.
    Rejection,
}

#[derive(Debug, Args)]
pub struct SampleWalkArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub start: Vec<i64>,
    #[arg(long)]
    pub steps: usize,
    /// Number of samples.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = WalkSampler::Exact)]
    pub method: WalkSampler,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub start: Vec<i64>,
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub y: Vec<f64>,
    /// Lattice scales L.
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    pub scale: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Number of particles, started at the origin.
    #[arg(long, conflicts_with = "start", required_unless_present = "start")]
    pub n: Option<usize>,
    /// Ordered starting point instead of the origin.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub start: Option<Vec<f64>>,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    /// Record every k-th grid state (the last one always).
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityKind {
    /// Absorbed (Karlin-McGregor) density.
    Km,
    /// Finite-horizon noncolliding density.
    G,
    /// Dyson density.
    P,
    /// Probability of no collision up to `--t` from `--x`.
    Survival,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurvivalChoice {
    Pfaffian,
    Quadrature,
    MonteCarlo,
    Asymptotic,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(value_enum)]
    pub kind: DensityKind,
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    #[arg(long)]
    pub t: f64,
    /// Starting point; omitted means the origin (with `--n` particles).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Option<Vec<f64>>,
    /// Horizon of the finite-horizon process.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long, value_enum, default_value_t = SurvivalChoice::Pfaffian)]
    pub method: SurvivalChoice,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Two-particle grid `lo,hi,cells` over the ordered pairs; prints CSV.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, required_unless_present = "criterion")]
    pub suite: Option<Suite>,
    /// Criterion numbers to run.
    #[arg(long, value_delimiter = ',')]
    pub criterion: Vec<u8>,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifySdeArgs {
    /// CSV written by `simulate-matrix`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSON report path (default: `--out` or stdout).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Steps for the Gamma estimate (default: the path length in the file).
    #[arg(long)]
    pub gamma_steps: Option<usize>,
}
