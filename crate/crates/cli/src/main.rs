//! `glpb`: pyramid inspection, pairwise blending, corpus scanning and
//! dataset augmentation runs.
//!
//! Exit codes:
//!
//! | code | meaning                                               |
//! |------|-------------------------------------------------------|
//! | 0    | success (including partial augmentation failures)     |
//! | 1    | invalid arguments, configuration, or output I/O error |
//! | 2    | input could not be read or decoded                    |
//! | 3    | too many pyramid levels for the image size            |
//! | 4    | image / mask dimensions do not match                  |
//! | 5    | a pairing pool has fewer than two distinct patients   |
//! | 6    | a corpus patient is missing from the fold             |
//! | 7    | every planned augmentation entry failed               |

mod commands;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "glpb",
    version,
    about = "Gaussian-Laplacian pyramid blending for data augmentation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write every Gaussian and Laplacian level of an image, plus the
    /// reconstruction from the Laplacian pyramid.
    Pyramid(PyramidArgs),
    /// Composite two images of the same size.
    Blend(BlendArgs),
    /// Count a corpus by class, subtype, magnification and patient.
    Scan(ScanArgs),
    /// Balance and multiply a corpus by blending images of different patients.
    Augment(AugmentArgs),
}

#[derive(Debug, Args)]
pub struct PyramidArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Number of reductions; defaults to floor(log2(min side)) - 2.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Halve the input with one reduce step first.
    #[arg(long)]
    pub resize_half: bool,
}

#[derive(Debug, Args)]
pub struct BlendArgs {
    /// Image supplying the first half (mask value 0).
    pub a: PathBuf,
    /// Image supplying the second half (mask value 1).
    pub b: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "glpb")]
    pub method: String,
    #[arg(long, default_value = "half_vertical")]
    pub mask_kind: String,
    /// Grayscale PNG mask, required with `--mask-kind custom`.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Ramp width in pixels for `--method mix`; defaults to a quarter of
    /// the blend span.
    #[arg(long)]
    pub transition_width: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub resize_half: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub root: PathBuf,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[arg(long)]
    pub root: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// JSON fold file mapping fold index to train/test patient lists.
    #[arg(long)]
    pub fold_file: Option<PathBuf>,
    #[arg(long, requires = "fold_file")]
    pub fold_index: Option<u32>,
    /// Equalize benign and malignant counts per magnification.
    #[arg(long)]
    pub balance: bool,
    /// Method used for balancing entries.
    #[arg(long, default_value = "glpb")]
    pub balance_method: String,
    /// Final size as a multiple of the (balanced) training set.
    #[arg(long, default_value_t = 1)]
    pub factor: usize,
    /// Method used for multiplication entries.
    #[arg(long, default_value = "jitter")]
    pub method: String,
    #[arg(long, default_value = "half_vertical")]
    pub mask_kind: String,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub transition_width: Option<usize>,
    #[arg(long, default_value_t = glpb::dataset::DEFAULT_JITTER_STRENGTH)]
    pub jitter_strength: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub resize_half: bool,
    /// Allow pairs from different magnifications.
    #[arg(long)]
    pub allow_cross_magnification: bool,
    /// Only pair images of the same tumor subtype.
    #[arg(long)]
    pub same_subtype: bool,
    /// Let each entry's seed decide which source supplies the first half.
    #[arg(long)]
    pub randomize_orientation: bool,
    /// Manifest path; defaults to `<out-dir>/manifest.jsonl`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Pyramid(args) => commands::pyramid(args),
        Command::Blend(args) => commands::blend(args),
        Command::Scan(args) => commands::scan(args),
        Command::Augment(args) => commands::augment(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
