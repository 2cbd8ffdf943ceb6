//! `wavesnet` command-line front end.
//!
//! Exit status: 0 on success, 2 for argument errors (including anything
//! clap rejects), 1 for runtime failures such as IO, bad file contents or a
//! diverging training run.

mod commands;
mod pnm;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavesnet::transform::BoundaryMode;
use wavesnet::wadsnet::Kind;

#[derive(Parser, Debug)]
#[command(name = "wavesnet", version, about = "Wavelet transform layers and toy WADS experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print filter coefficients (or list every wavelet when none is given).
    Filters {
        #[arg(long)]
        wavelet: Option<String>,
    },
    /// Decompose a PGM/PPM image into subband files.
    Dwt {
        input: PathBuf,
        output_dir: PathBuf,
        #[arg(long, default_value = "haar")]
        wavelet: String,
        #[arg(long, default_value = "symmetric")]
        mode: BoundaryMode,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// Also write a min-max rescaled 8-bit image of every stored band.
        #[arg(long)]
        visualize: bool,
    },
    /// Reconstruct an image from a subband directory. A `.wlt` output keeps
    /// the unquantized tensor.
    Idwt {
        input_dir: PathBuf,
        output: PathBuf,
        /// Fail unless the directory was written with this wavelet.
        #[arg(long)]
        wavelet: Option<String>,
        /// Fail unless the directory was written with this mode.
        #[arg(long)]
        mode: Option<BoundaryMode>,
    },
    /// PSNR between two images or WLT1 tensors.
    Psnr {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        peak: f64,
    },
    /// Segmentation metrics for two label maps stored as PGM bytes.
    Evalseg {
        truth: PathBuf,
        pred: PathBuf,
        #[arg(long)]
        classes: usize,
    },
    /// Reconstruction error near the image border, one row per wavelet.
    Boundary {
        #[arg(long, value_delimiter = ',', default_value = "haar,db2,db3,db4,db5,db6")]
        wavelet_list: Vec<String>,
        #[arg(long, default_value = "zero")]
        mode: BoundaryMode,
        #[arg(long, default_value_t = 64)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Train one toy network and write its epoch log.
    Train {
        output: PathBuf,
        #[arg(long, default_value = "wads")]
        kind: Kind,
        #[arg(long, default_value = "haar")]
        wavelet: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 300)]
        epochs: usize,
        #[command(flatten)]
        opts: TrainOpts,
    },
    /// Train WADS and PUDS networks per seed and report held-out IoU.
    Compare {
        output: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        seeds: Vec<u64>,
        #[arg(long, default_value = "haar")]
        wavelet: String,
        #[arg(long, default_value_t = 40)]
        epochs: usize,
        #[arg(long, default_value_t = 50)]
        test_samples: usize,
        #[command(flatten)]
        opts: TrainOpts,
    },
}

#[derive(Args, Debug)]
struct TrainOpts {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Side length of the square synthetic images.
    #[arg(long, default_value_t = 32)]
    size: usize,
    #[arg(long, default_value_t = 0.05)]
    lr: f64,
    #[arg(long, default_value_t = 0.9)]
    momentum: f64,
    #[arg(long, default_value_t = 8)]
    batch_size: usize,
    /// Compute per-sample gradients on one thread.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
