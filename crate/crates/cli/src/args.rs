use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use embcanon::align::DEFAULT_TOP_T;
use embcanon::cluster::DEFAULT_THRESHOLD;

#[derive(Parser, Debug)]
#[command(name = "embcanon", version, about = "Rotate word embeddings to canonical coordinates and report on their components")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the model rotated to canonical coordinates (WV = UΣ)
    Rotate(RotateArgs),
    /// Singular values of the word matrix, largest first
    Spectrum(SpectrumArgs),
    /// Per-component interpretability in source and canonical coordinates
    Interp(InterpArgs),
    /// Top and bottom words of canonical components, clustered
    Components(ComponentsArgs),
    /// Match the components of two models by shared top/bottom words
    Align(AlignArgs),
    /// Fit the orthogonal map between two trainings of the same model
    RetrainCheck(RetrainArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputOpts {
    /// Read at most this many (most frequent) words
    #[arg(long, default_value_t = 100_000)]
    pub limit: usize,
    /// Input files have no "N d" header line (also applies to written files)
    #[arg(long)]
    pub no_header: bool,
    /// Rotate the raw vectors without normalizing rows first. The
    /// interpretability identities assume unit rows; use with care
    #[arg(long)]
    pub skip_normalize: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Json,
    Markdown,
}

#[derive(Args, Debug)]
pub struct RotateArgs {
    pub input: PathBuf,
    /// Where to write the rotated model
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
    /// tsv (default) or json
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct InterpArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
    /// Words per side for the restricted measure
    #[arg(long, default_value_t = DEFAULT_TOP_T)]
    pub top_t: usize,
    /// Also check the total against this many random rotations (stderr)
    #[arg(long, default_value_t = 0)]
    pub random_rotations: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// tsv (default) or json
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ComponentsArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
    /// Words per side in the table (the usual choices are 15 and 30)
    #[arg(long, default_value_t = 15)]
    pub table_t: usize,
    /// Cosine a word must exceed to join a cluster
    #[arg(long, default_value_t = DEFAULT_THRESHOLD, allow_negative_numbers = true)]
    pub threshold: f64,
    /// Report the first N components
    #[arg(long, default_value_t = 5, conflicts_with = "component")]
    pub components: usize,
    /// Report this component (0-based); repeatable
    #[arg(long)]
    pub component: Vec<usize>,
    /// markdown (default) or json
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct AlignArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
    /// Words per side in each component's word set
    #[arg(long, default_value_t = DEFAULT_TOP_T)]
    pub top_t: usize,
    /// tsv (default) or json
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct RetrainArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
    /// json (default) or tsv
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}
