//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use specsal_core::filters::SpectrumLayout;
use specsal_core::taskgen::TaskKind;

#[derive(Debug, Parser)]
#[command(name = "specsal", version, about = "Amplitude-spectrum filtering for same-different tasks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render an image's spectrum, filtered spectrum or saliency map.
    Transform(TransformArgs),
    /// Write a labelled task dataset as PGM files plus a manifest.
    Generate(GenerateArgs),
    /// Few-shot k-NN accuracy per task and feature kind.
    Evaluate(EvaluateArgs),
    /// Validation sweep over percentile parameters, or over sigma.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum LayoutArg {
    #[default]
    Unshifted,
    Centered,
}

impl From<LayoutArg> for SpectrumLayout {
    fn from(l: LayoutArg) -> Self {
        match l {
            LayoutArg::Unshifted => SpectrumLayout::Unshifted,
            LayoutArg::Centered => SpectrumLayout::Centered,
        }
    }
}

pub fn parse_task(s: &str) -> Result<TaskKind, String> {
    s.parse::<TaskKind>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    /// Input image (PGM P2/P5 or PNG).
    pub input: PathBuf,
    /// RAW, A, A_P, A_G or S_P; also SR (spectral residual), PO (phase
    /// only) and S_G (smoothed-amplitude saliency).
    #[arg(long, default_value = "A_P")]
    pub feature: String,
    #[arg(long, default_value_t = 10.0)]
    pub p: f64,
    /// Percentile window as a fraction of the image width.
    #[arg(long, default_value_t = 0.2)]
    pub wf: f64,
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    /// Box size of the spectral-residual average.
    #[arg(long = "box", default_value_t = 3)]
    pub box_size: usize,
    /// Square and smooth saliency maps with this sigma.
    #[arg(long)]
    pub post_sigma: Option<f64>,
    #[arg(long, value_enum, default_value_t = LayoutArg::Unshifted)]
    pub layout: LayoutArg,
    /// Output PGM path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_task)]
    pub task: TaskKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub shots: usize,
    #[arg(long, default_value_t = 1000)]
    pub test_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = LayoutArg::Unshifted)]
    pub layout: LayoutArg,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_parser = parse_task, value_delimiter = ',', default_value = "SD1,SD5,SD15,SD16,SD22")]
    pub task: Vec<TaskKind>,
    #[arg(long, value_delimiter = ',', default_value = "RAW,A,A_P")]
    pub feature: Vec<String>,
    #[arg(long, default_value_t = 10.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.2)]
    pub wf: f64,
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// CSV report path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_task, value_delimiter = ',', default_value = "SD1,SD15")]
    pub task: Vec<TaskKind>,
    /// A_P or S_P for the percentile grid.
    #[arg(long, default_value = "A_P")]
    pub feature: String,
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
    pub wf: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<usize>,
    /// Sweep sigma of the Gaussian-filtered amplitude instead.
    #[arg(long)]
    pub sigma_sweep: bool,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
    pub sigma: Vec<f64>,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[arg(long)]
    pub out: PathBuf,
}
