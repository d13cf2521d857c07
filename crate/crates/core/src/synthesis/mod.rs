//! Scanline view synthesis.
//!
//! Two cameras render one image row each, a block matcher estimates the
//! disparity between them, and the virtual view is produced by forward
//! warping both rows and blending them. Pixels that no source pixel reaches
//! are holes; their widths are what an observer would measure.

mod matching;
mod render;
mod warp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig9;

pub use matching::{match_disparity, DEFAULT_WINDOW};
pub use render::{default_max_disparity, ground_truth_disparity, render_scanline};
pub use warp::{fill_holes, measure_holes, resample_to_right_grid, synthesize, synthesize_inverse};

/// Smallest accepted scanline width.
pub const MIN_WIDTH: usize = 16;

/// One image row. Intensities lie in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scanline {
    pixels: Vec<f64>,
    pitch: f64,
}

impl Scanline {
    pub fn new(pixels: Vec<f64>, pitch: f64) -> Result<Self> {
        if pixels.len() < MIN_WIDTH {
            return Err(Error::InvalidScanline(format!(
                "width {} is below {MIN_WIDTH}",
                pixels.len()
            )));
        }
        if !(pitch > 0.0 && pitch.is_finite()) {
            return Err(Error::InvalidScanline(format!("pitch {pitch} must be positive")));
        }
        if let Some(u) = pixels.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidScanline(format!(
                "intensity {} at pixel {u} is outside [0, 1]",
                pixels[u]
            )));
        }
        Ok(Self { pixels, pitch })
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn width(&self) -> usize {
        self.pixels.len()
    }

    /// `index,intensity` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,intensity\n");
        for (u, v) in self.pixels.iter().enumerate() {
            out.push_str(&format!("{u},{}\n", sig9(*v)));
        }
        out
    }
}

/// Signed per-pixel disparity `D = u_R - u_L` on the left image grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisparityMap {
    pub disparity_px: Vec<f64>,
    pub valid_mask: Vec<bool>,
}

impl DisparityMap {
    pub fn new(disparity_px: Vec<f64>, valid_mask: Vec<bool>) -> Result<Self> {
        let width = disparity_px.len();
        if valid_mask.len() != width {
            return Err(Error::InvalidScanline(format!(
                "disparity has {width} entries but the mask has {}",
                valid_mask.len()
            )));
        }
        if let Some(u) = disparity_px
            .iter()
            .position(|d| !(d.is_finite() && d.abs() < width as f64))
        {
            return Err(Error::InvalidScanline(format!(
                "disparity {} at pixel {u} is not below the width",
                disparity_px[u]
            )));
        }
        Ok(Self {
            disparity_px,
            valid_mask,
        })
    }

    pub fn width(&self) -> usize {
        self.disparity_px.len()
    }

    pub fn valid_count(&self) -> usize {
        self.valid_mask.iter().filter(|v| **v).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisOutput {
    /// Warped and blended view; hole pixels hold 0.
    pub image: Scanline,
    /// Pixels no source pixel was warped onto.
    pub hole_mask: Vec<bool>,
    /// Interior hole widths on the image plane in meters, largest first.
    pub measured_hole_widths: Vec<f64>,
    pub filled_image: Scanline,
}

impl SynthesisOutput {
    pub fn hole_count(&self) -> usize {
        self.hole_mask.iter().filter(|h| **h).count()
    }
}

/// Maximal runs of `true` as `(start, len)`.
pub(crate) fn true_runs(mask: &[bool]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut u = 0;
    while u < mask.len() {
        if mask[u] {
            let start = u;
            while u < mask.len() && mask[u] {
                u += 1;
            }
            runs.push((start, u - start));
        } else {
            u += 1;
        }
    }
    runs
}
