//! `rsw`: stochastic-watershed hierarchies from the command line.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data errors. Every
//! failure prints a single `error: ...` line on stderr.

mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "rsw", version, about = "Regionalized stochastic-watershed segmentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Inputs shared by every command that rebuilds the graph from an image.
#[derive(Debug, Args)]
struct GraphArgs {
    /// Input image (binary PGM or PPM, 8 or 16 bit).
    #[arg(long)]
    image: PathBuf,
    /// Fine partition as a 16-bit label PGM; flat zones of the image otherwise.
    #[arg(long)]
    fine_partition: Option<PathBuf>,
    /// Quantization levels for the flat-zone fallback partition.
    #[arg(long, default_value_t = rsw_core::partition::DEFAULT_QUANTIZATION)]
    quantization: u32,
    /// Edge dissimilarity: mean-color or min-gradient.
    #[arg(long, default_value = "mean-color")]
    dissimilarity: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the fine partition, graph, spanning tree and base hierarchy.
    Build {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Re-value the tree with one density model and write the hierarchy.
    Reweight {
        #[command(flatten)]
        graph: GraphArgs,
        /// Density model JSON.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Chain several re-valuations; `--length` repeats the model sequence.
    Chain {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, required = true)]
        model: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        length: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Cut a hierarchy into a label map by region count or threshold.
    Cut {
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long)]
        fine_partition: PathBuf,
        #[arg(long, group = "level", required = true)]
        k: Option<usize>,
        #[arg(long, group = "level", allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Marker-based segmentation from pixel coordinates `x,y,x,y,...`.
    Markers {
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long)]
        fine_partition: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render the ultrametric contour map (16-bit PGM plus JSON scale).
    Ucm {
        #[arg(long)]
        hierarchy: PathBuf,
        #[arg(long)]
        fine_partition: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Optional 8-bit inverted-contrast rendering.
        #[arg(long)]
        display: Option<PathBuf>,
    },
    /// Monte-Carlo cut frequencies of every tree edge, as CSV.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        Self::Data(e)
    }
}

impl From<rsw_core::Error> for CliError {
    fn from(e: rsw_core::Error) -> Self {
        Self::Data(e.into())
    }
}

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("RSW_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("RSW_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Data(e.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let summary = text.split("\n\n").next().unwrap_or("invalid usage");
            eprintln!("error: usage: {}", one_line(summary.trim_start_matches("error: ")));
            return ExitCode::from(1);
        }
    };
    match configure_threads().and_then(|()| commands::run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: usage: {}", one_line(&msg));
            ExitCode::from(1)
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {}", one_line(&format!("{e:#}")));
            ExitCode::from(2)
        }
    }
}
