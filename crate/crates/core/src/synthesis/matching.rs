//! Sum-of-absolute-differences block matching with a left-right check.

use rayon::prelude::*;

use super::{DisparityMap, Scanline};
use crate::error::{invalid, Result};

/// Default block size: wide enough to make matches unique on the rendered
/// textures.
pub const DEFAULT_WINDOW: usize = 21;

/// Matches within this many pixels of each other pass the left-right check.
const CROSS_CHECK_TOLERANCE: usize = 1;

/// A match is kept only when its cost is at most this fraction of the best
/// cost found more than one pixel away from it.
const UNIQUENESS_RATIO: f64 = 0.5;

/// Cheapest disparity magnitude at one pixel and whether it beat every
/// candidate more than a pixel away by the uniqueness ratio.
#[derive(Debug, Clone, Copy)]
struct Match {
    d: usize,
    unique: bool,
}

/// SAD of the window centered at `c` for every center and candidate,
/// `costs[d][c]`, infinite where the window leaves either image.
fn window_costs(reference: &[f64], other: &[f64], half: usize, max_disp: usize, sign: isize) -> Vec<Vec<f64>> {
    let width = reference.len() as isize;
    let half = half as isize;
    (0..=max_disp)
        .into_par_iter()
        .map(|d| {
            (0..width)
                .map(|c| {
                    let v = c - sign * d as isize;
                    if c - half < 0 || c + half >= width || v - half < 0 || v + half >= width {
                        return f64::INFINITY;
                    }
                    (-half..=half)
                        .map(|k| (reference[(c + k) as usize] - other[(v + k) as usize]).abs())
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Best disparity magnitude for each pixel of `reference`, searching
/// `other[u - sign * d]` for `d` in `0..=max_disp`. Each pixel takes the
/// cheapest of the windows that contain it, so pixels next to a depth edge
/// can match with a window lying on their own side. Ties go to the smallest
/// `d`. `None` where no window fits or the best match is not distinctly
/// better than the runner-up.
fn best_matches(reference: &[f64], other: &[f64], half: usize, max_disp: usize, sign: isize) -> Vec<Option<Match>> {
    let costs = window_costs(reference, other, half, max_disp, sign);
    let width = reference.len();
    (0..width)
        .into_par_iter()
        .map(|u| {
            let centers = u.saturating_sub(half)..(u + half + 1).min(width);
            let shifted: Vec<f64> = costs
                .iter()
                .map(|row| row[centers.clone()].iter().copied().fold(f64::INFINITY, f64::min))
                .collect();
            let (best_d, best_cost) = shifted
                .iter()
                .enumerate()
                .fold(None, |acc: Option<(usize, f64)>, (d, c)| match acc {
                    Some((_, b)) if *c >= b => acc,
                    _ => Some((d, *c)),
                })
                .filter(|(_, c)| c.is_finite())?;
            let runner_up = shifted
                .iter()
                .enumerate()
                .filter(|(d, _)| d.abs_diff(best_d) > 1)
                .map(|(_, c)| *c)
                .fold(f64::INFINITY, f64::min);
            Some(Match {
                d: best_d,
                unique: best_cost <= UNIQUENESS_RATIO * runner_up,
            })
        })
        .collect()
}

/// Disparity of `left` relative to `right` on the left grid, signed so that
/// `u_R = u_L + D`. The right camera sits to the right of the left one, so
/// `D <= 0`. Pixels failing the left-right check are marked invalid.
pub fn match_disparity(left: &Scanline, right: &Scanline, window: usize, max_disp: usize) -> Result<DisparityMap> {
    let width = left.width();
    if right.width() != width {
        return Err(invalid(
            "right",
            format!("width {} differs from the left width {width}", right.width()),
        ));
    }
    if window < 3 || window % 2 == 0 {
        return Err(invalid("window", format!("{window} must be odd and at least 3")));
    }
    if max_disp >= width {
        return Err(invalid("max_disp", format!("{max_disp} must be below the width {width}")));
    }
    let half = window / 2;
    let from_left = best_matches(left.pixels(), right.pixels(), half, max_disp, 1);
    let from_right = best_matches(right.pixels(), left.pixels(), half, max_disp, -1);
    let (disparity, valid) = from_left
        .iter()
        .enumerate()
        .map(|(u, m)| match m {
            Some(m) => {
                let back = from_right[u - m.d];
                let valid = back.is_some_and(|b| {
                    b.d.abs_diff(m.d) <= CROSS_CHECK_TOLERANCE && m.unique && b.unique
                });
                (-(m.d as f64), valid)
            }
            None => (0.0, false),
        })
        .unzip();
    DisparityMap::new(disparity, valid)
}
