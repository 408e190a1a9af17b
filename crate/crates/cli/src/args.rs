use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cumdir",
    version,
    allow_negative_numbers = true,
    about = "Causal direction between two variables under latent confounders"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Overrides shared by every subcommand. Unset values fall back to the
/// subcommand's own defaults.
#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Determinant-equality threshold.
    #[arg(long, global = true, env = "CUMDIR_EPSILON")]
    pub epsilon: Option<f64>,

    /// Relative singular-value tolerance for rank decisions.
    #[arg(long, global = true, env = "CUMDIR_RANK_TOL")]
    pub rank_tol: Option<f64>,

    /// Largest cumulant matrix order tried.
    #[arg(long, global = true, env = "CUMDIR_K_MAX")]
    pub k_max: Option<usize>,

    /// Skip the rank search and assume this many latent confounders.
    #[arg(long, global = true, env = "CUMDIR_ASSUME_M")]
    pub assume_m: Option<usize>,

    #[arg(long, global = true, env = "CUMDIR_SEED")]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, env = "CUMDIR_FORMAT", default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// CSV files have no header line.
    #[arg(long, global = true, env = "CUMDIR_NO_HEADER")]
    pub no_header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infer the causal direction from a two-column CSV file.
    Infer(InferArgs),
    /// Generate data from a random model, with the model as a JSON sidecar.
    Simulate(SimulateArgs),
    /// Run a simulation study.
    Benchmark(BenchmarkArgs),
    /// Check the rank and determinant statements on exact population tables.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
pub struct InferArgs {
    /// CSV with the X column first and the Y column second.
    #[arg(env = "CUMDIR_INPUT")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// 1: no latents, 2: one latent, 3: two or more.
    #[arg(long, env = "CUMDIR_CASE")]
    pub case: u8,

    /// Latent count; defaults to the case's smallest.
    #[arg(long, env = "CUMDIR_M")]
    pub m: Option<usize>,

    /// Noise families (names or d1..d5), comma-separated; each source picks one.
    #[arg(
        long,
        env = "CUMDIR_FAMILY",
        value_delimiter = ',',
        default_value = "laplace"
    )]
    pub family: Vec<String>,

    #[arg(long, env = "CUMDIR_N", default_value_t = 10_000)]
    pub n: usize,

    /// Output CSV path.
    #[arg(long, short, env = "CUMDIR_OUT")]
    pub out: PathBuf,

    /// Model JSON path; defaults to the CSV path with a `.model.json` suffix.
    #[arg(long, env = "CUMDIR_SIDECAR")]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Plan file (`.json` or `.toml`); the full three-case study when omitted.
    #[arg(long, env = "CUMDIR_PLAN")]
    pub plan: Option<PathBuf>,

    /// 25 replicates and sample sizes up to 10k.
    #[arg(long, env = "CUMDIR_FAST", conflicts_with = "plan")]
    pub fast: bool,

    /// Report path; stdout when omitted.
    #[arg(long, short, env = "CUMDIR_OUT")]
    pub out: Option<PathBuf>,

    /// Report format; follows `--format` (text meaning markdown) when omitted.
    #[arg(long, value_enum, env = "CUMDIR_REPORT_FORMAT")]
    pub report_format: Option<ReportKind>,

    /// Include per-cell wall-clock times.
    #[arg(long, env = "CUMDIR_TIMING")]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, env = "CUMDIR_M_MIN", default_value_t = 0)]
    pub m_min: usize,

    #[arg(long, env = "CUMDIR_M_MAX", default_value_t = 4)]
    pub m_max: usize,

    #[arg(long, env = "CUMDIR_MODELS_PER_M", default_value_t = 100)]
    pub models_per_m: usize,

    /// Lower bound on the effect-side determinant.
    #[arg(long, env = "CUMDIR_EFFECT_DET_MIN", default_value_t = 1e-6)]
    pub effect_det_min: f64,

    /// Upper bound on the cause-side determinant.
    #[arg(long, env = "CUMDIR_CAUSE_DET_MAX", default_value_t = 1e-8)]
    pub cause_det_max: f64,

    /// Break irreducibility by zeroing the first latent's effect-side loading.
    #[arg(long, hide = true, env = "CUMDIR_INJECT_REDUCIBLE")]
    pub inject_reducible: bool,
}
