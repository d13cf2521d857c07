//! `veil`: batch front end for camera-location leakage analyses.
//!
//! Exit codes: 0 success, 1 unreadable input or unwritable output,
//! 2 invalid input.

mod commands;
mod error;
mod report;
mod svg;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use veil_core::oracle::DEFAULT_RESOLUTION;
use veil_core::synthesis::DEFAULT_WINDOW;

use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "veil", version, about = "Camera-location leakage analysis for view synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Forecast the hole of an extrapolated view and score the observer's inference.
    Extrapolate {
        scene: PathBuf,
        /// Let the observer also use the virtual view's position to prune suspects.
        #[arg(long)]
        prune_with_offset: bool,
    },
    /// Classify an interpolated view of a circle-cap object and score it.
    Interpolate { scene: PathBuf },
    /// Sweep one parameter; write a CSV table and an SVG plot of anonymity.
    Sweep {
        spec: PathBuf,
        out_csv: PathBuf,
        out_svg: PathBuf,
        #[arg(long)]
        prune_with_offset: bool,
    },
    /// Render both camera rows, synthesize the virtual view and measure its holes.
    Synthesize {
        scene: PathBuf,
        out_dir: PathBuf,
        /// Texture seed.
        #[arg(long, env = "VEIL_SEED", default_value_t = 1)]
        seed: u64,
        /// Matching window in pixels (odd).
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        /// Largest disparity searched; defaults to the scene's largest plus a margin.
        #[arg(long)]
        max_disp: Option<usize>,
        /// Use exact disparities instead of stereo matching.
        #[arg(long)]
        ground_truth: bool,
    },
    /// Ray-cast the scene and compare against the closed forms.
    Oracle {
        scene: PathBuf,
        /// Number of background rays.
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Extrapolate {
            scene,
            prune_with_offset,
        } => commands::extrapolate(&scene, prune_with_offset),
        Command::Interpolate { scene } => commands::interpolate(&scene),
        Command::Sweep {
            spec,
            out_csv,
            out_svg,
            prune_with_offset,
        } => commands::sweep(&spec, &out_csv, &out_svg, prune_with_offset),
        Command::Synthesize {
            scene,
            out_dir,
            seed,
            window,
            max_disp,
            ground_truth,
        } => commands::synthesize(
            &scene,
            &out_dir,
            &commands::SynthesisOptions {
                seed,
                window,
                max_disp,
                ground_truth,
            },
        ),
        Command::Oracle { scene, resolution } => commands::oracle(&scene, resolution),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(stdout) => {
            let mut lock = std::io::stdout().lock();
            if lock.write_all(stdout.as_bytes()).and_then(|()| lock.flush()).is_err() {
                return ExitCode::from(error::EXIT_IO);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("veil: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
