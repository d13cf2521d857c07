//! Forward warping into the virtual view, blending, and hole handling.

use super::{true_runs, DisparityMap, Scanline, SynthesisOutput};
use crate::error::{invalid, Error, Result};
use crate::scene::{ImagingParams, SceneGeometry};

/// Sources whose disparity magnitudes differ by at most this many pixels at
/// a destination are blended; otherwise the nearer one wins.
const BLEND_TOLERANCE_PX: f64 = 1.0;

/// Per-pixel cost of declaring a pixel occluded while completing a
/// disparity gap, in intensity units.
const OCCLUSION_COST: f64 = 0.06;

/// Completes a left-grid disparity map across its invalid runs.
///
/// A run between two valid pixels holds up to one depth edge. Pixels on the
/// near side take the foreground disparity and the rest the background one.
/// When the background lies to the left, the `|D_fg| - |D_bg|` pixels just
/// left of the edge are seen by the left camera only; they take the
/// background disparity and pay a flat cost; every other pixel pays the
/// absolute difference between `left[u]` and `right[u + D(u)]`, and the edge
/// goes where the total is smallest. Runs touching an end of the row copy their only
/// neighbor. `None` when no pixel is valid.
fn complete_left_disparity(left: &[f64], right: &[f64], values: &[f64], valid: &[bool]) -> Option<Vec<f64>> {
    if !valid.iter().any(|v| *v) {
        return None;
    }
    let width = values.len();
    let photo_error = |u: usize, d: f64| {
        let v = (u as f64 + d).round();
        if v < 0.0 || v >= width as f64 {
            0.0
        } else {
            (left[u] - right[v as usize]).abs()
        }
    };
    let mut out = values.to_vec();
    let gaps: Vec<bool> = valid.iter().map(|v| !v).collect();
    for (s, n) in true_runs(&gaps) {
        let t = s + n;
        let (a, b) = match (s.checked_sub(1).map(|u| values[u]), (t < width).then(|| values[t])) {
            (Some(a), Some(b)) => (a, b),
            (Some(a), None) => {
                out[s..t].fill(a);
                continue;
            }
            (None, Some(b)) => {
                out[s..t].fill(b);
                continue;
            }
            (None, None) => unreachable!("at least one valid entry exists"),
        };
        let occluded = if b.abs() > a.abs() {
            (b.abs() - a.abs()).round() as usize
        } else {
            0
        };
        if occluded >= n {
            out[s..t].fill(a);
            continue;
        }
        // Edge at `s + i`: [s, s + i - occluded) takes `a` and votes with
        // its photo error, the occluded pixels before the edge pay a flat
        // cost, and [s + i, t) takes `b`.
        let mut prefix_a = vec![0.0; n + 1];
        let mut suffix_b = vec![0.0; n + 1];
        for i in 0..n {
            prefix_a[i + 1] = prefix_a[i] + photo_error(s + i, a);
        }
        for i in (0..n).rev() {
            suffix_b[i] = suffix_b[i + 1] + photo_error(s + i, b);
        }
        let edge = (0..=n)
            .map(|i| {
                let voting = i.saturating_sub(occluded);
                (i, prefix_a[voting] + (i - voting) as f64 * OCCLUSION_COST + suffix_b[i])
            })
            .fold(None, |acc: Option<(usize, f64)>, (i, c)| match acc {
                Some((_, best)) if c >= best => acc,
                _ => Some((i, c)),
            })
            .map_or(n, |(i, _)| i);
        out[s..s + edge].fill(a);
        out[s + edge..t].fill(b);
    }
    Some(out)
}

/// Right-grid counterpart of [`complete_left_disparity`]. Reversing both
/// rows turns `left[u - D]` lookups into `left[u' + D]` and moves the
/// right-only strips to the left of their edges, so the same completion
/// applies.
fn complete_right_disparity(left: &[f64], right: &[f64], on_right: &DisparityMap) -> Option<Vec<f64>> {
    let rev = |v: &[f64]| v.iter().rev().copied().collect::<Vec<f64>>();
    let valid: Vec<bool> = on_right.valid_mask.iter().rev().copied().collect();
    let mut out = complete_left_disparity(&rev(right), &rev(left), &rev(&on_right.disparity_px), &valid)?;
    out.reverse();
    Some(out)
}

/// Winning source pixel at one destination: largest magnitude first, then
/// lowest source index.
#[derive(Debug, Clone, Copy)]
struct Splat {
    magnitude: f64,
    source: usize,
    value: f64,
}

fn splat(slots: &mut [Option<Splat>], dest: f64, candidate: Splat) {
    let dest = dest.round();
    if dest < 0.0 || dest >= slots.len() as f64 {
        return;
    }
    let slot = &mut slots[dest as usize];
    let wins = match slot {
        None => true,
        Some(s) => {
            candidate.magnitude > s.magnitude
                || (candidate.magnitude == s.magnitude && candidate.source < s.source)
        }
    };
    if wins {
        *slot = Some(candidate);
    }
}

/// Moves the left-grid disparity onto the right grid by forward mapping each
/// valid pixel to `u + D`. Collisions keep the nearer surface. Right pixels
/// no valid left pixel reaches are invalid.
pub fn resample_to_right_grid(disp: &DisparityMap) -> DisparityMap {
    let mut slots = vec![None; disp.width()];
    for (u, (d, ok)) in disp.disparity_px.iter().zip(&disp.valid_mask).enumerate() {
        if *ok {
            let candidate = Splat {
                magnitude: d.abs(),
                source: u,
                value: *d,
            };
            splat(&mut slots, u as f64 + d, candidate);
        }
    }
    DisparityMap {
        disparity_px: slots.iter().map(|s| s.map_or(0.0, |s| s.value)).collect(),
        valid_mask: slots.iter().map(Option::is_some).collect(),
    }
}

fn check_inputs(left: &Scanline, right: &Scanline, disp: &DisparityMap) -> Result<()> {
    if right.width() != left.width() || disp.width() != left.width() {
        return Err(invalid(
            "disparity",
            format!(
                "widths differ: left {}, right {}, disparity {}",
                left.width(),
                right.width(),
                disp.width()
            ),
        ));
    }
    if left.pitch() != right.pitch() {
        return Err(invalid("right", "pitch differs from the left pitch"));
    }
    Ok(())
}

fn finish(image: Vec<f64>, hole_mask: Vec<bool>, pitch: f64) -> Result<SynthesisOutput> {
    let filled = fill_line(&image, &hole_mask)?;
    Ok(SynthesisOutput {
        measured_hole_widths: interior_hole_widths(&hole_mask, pitch),
        image: Scanline::new(image, pitch)?,
        hole_mask,
        filled_image: Scanline::new(filled, pitch)?,
    })
}

/// Synthesizes the view at `scene.synth_x` from the two rows and the
/// left-grid disparity `D = u_R - u_L`.
///
/// With `w = (x_S - x_L) / b`, left pixels land at `u + w D` and right
/// pixels at `u + (w - 1) D_R`, where `D_R` is `D` resampled onto the right
/// grid. Invalid left disparities and unreached right pixels are completed
/// first, see [`complete_left_disparity`]. Where both sources land at similar depth the result is
/// `(1 - w) I_L + w I_R`, clamped to `[0, 1]`; a source whose weight is
/// exactly zero is not used.
pub fn synthesize(
    left: &Scanline,
    right: &Scanline,
    disp: &DisparityMap,
    scene: &SceneGeometry,
) -> Result<SynthesisOutput> {
    check_inputs(left, right, disp)?;
    let b = scene.baseline();
    if !(b > 0.0) {
        return Err(invalid("baseline", format!("{b} must be positive")));
    }
    let no_valid = || Error::InvalidScanline("disparity map has no valid pixel".to_owned());
    let d_left = complete_left_disparity(left.pixels(), right.pixels(), &disp.disparity_px, &disp.valid_mask)
        .ok_or_else(no_valid)?;
    let completed = DisparityMap {
        valid_mask: vec![true; d_left.len()],
        disparity_px: d_left.clone(),
    };
    let on_right = resample_to_right_grid(&completed);
    let d_right = complete_right_disparity(left.pixels(), right.pixels(), &on_right).ok_or_else(no_valid)?;

    let w = scene.synthesis_weight();
    let (weight_l, weight_r) = (1.0 - w, w);
    let width = left.width();
    let mut from_left = vec![None; width];
    let mut from_right = vec![None; width];
    if weight_l != 0.0 {
        for (u, d) in d_left.iter().enumerate() {
            let s = Splat {
                magnitude: d.abs(),
                source: u,
                value: left.pixels()[u],
            };
            splat(&mut from_left, u as f64 + w * d, s);
        }
    }
    if weight_r != 0.0 {
        for (u, d) in d_right.iter().enumerate() {
            let s = Splat {
                magnitude: d.abs(),
                source: u,
                value: right.pixels()[u],
            };
            splat(&mut from_right, u as f64 + (w - 1.0) * d, s);
        }
    }

    let (image, hole_mask): (Vec<f64>, Vec<bool>) = from_left
        .iter()
        .zip(&from_right)
        .map(|(l, r)| match (l, r) {
            (Some(l), Some(r)) if (l.magnitude - r.magnitude).abs() <= BLEND_TOLERANCE_PX => {
                ((weight_l * l.value + weight_r * r.value).clamp(0.0, 1.0), false)
            }
            (Some(l), Some(r)) => (if l.magnitude > r.magnitude { l.value } else { r.value }, false),
            (Some(s), None) | (None, Some(s)) => (s.value, false),
            (None, None) => (0.0, true),
        })
        .unzip();
    finish(image, hole_mask, left.pitch())
}

/// Inverse-warping form on the right grid: `I_S(u) = (1 - w) I_L(u - D_R(u))
/// + w I_R(u)`, with `disp_right` holding `D = u_R - u_L` indexed by the
/// right pixel. Pixels with invalid disparity or a source outside the left
/// row are holes.
pub fn synthesize_inverse(
    left: &Scanline,
    right: &Scanline,
    disp_right: &DisparityMap,
    w: f64,
) -> Result<SynthesisOutput> {
    check_inputs(left, right, disp_right)?;
    let width = left.width() as f64;
    let (image, hole_mask): (Vec<f64>, Vec<bool>) = (0..left.width())
        .map(|u| {
            let src = (u as f64 - disp_right.disparity_px[u]).round();
            if !disp_right.valid_mask[u] || src < 0.0 || src >= width {
                return (0.0, true);
            }
            let l = left.pixels()[src as usize];
            let value = (1.0 - w) * l + w * right.pixels()[u];
            (value.clamp(0.0, 1.0), false)
        })
        .unzip();
    finish(image, hole_mask, left.pitch())
}

fn fill_line(image: &[f64], hole_mask: &[bool]) -> Result<Vec<f64>> {
    if hole_mask.iter().all(|h| *h) {
        return Err(Error::AllHoles);
    }
    let mut out = image.to_vec();
    for (start, len) in true_runs(hole_mask) {
        let before = start.checked_sub(1).map(|u| image[u]);
        let after = (start + len < image.len()).then(|| image[start + len]);
        for i in 0..len {
            out[start + i] = match (before, after) {
                (Some(a), Some(b)) => a + (b - a) * (i + 1) as f64 / (len + 1) as f64,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => unreachable!("the line has a valid pixel"),
            };
        }
    }
    Ok(out)
}

/// Hole runs strictly inside the row, in meters, largest first. Runs that
/// touch either end of the row are field-of-view loss, not occlusion holes.
fn interior_hole_widths(hole_mask: &[bool], pitch: f64) -> Vec<f64> {
    let mut widths: Vec<f64> = true_runs(hole_mask)
        .into_iter()
        .filter(|(start, len)| *start > 0 && start + len < hole_mask.len())
        .map(|(_, len)| len as f64 * pitch)
        .collect();
    widths.sort_by(|a, b| b.total_cmp(a));
    widths
}

/// Linear interpolation across every hole run; runs at the ends take the
/// nearest valid value.
pub fn fill_holes(out: &SynthesisOutput) -> Result<Scanline> {
    Scanline::new(fill_line(out.image.pixels(), &out.hole_mask)?, out.image.pitch())
}

/// Interior hole widths on the image plane at the given pixel pitch.
pub fn measure_holes(out: &SynthesisOutput, imaging: &ImagingParams) -> Vec<f64> {
    interior_hole_widths(&out.hole_mask, imaging.pixel_pitch)
}
