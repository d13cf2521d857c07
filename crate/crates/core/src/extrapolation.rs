//! Hole prediction for a virtual view synthesized outside the baseline, and
//! the observer's inversion of a measured hole back to camera constraints.
//!
//! The analysis is written for a virtual view to the right of `R`. A view to
//! the left of `L` is reduced to that case by mirroring the scene about the
//! object's center.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scene::{project_length, HoleMeasurement, ImagingParams, ObserverGuess, SceneGeometry};

/// Ratios closer than this to an integer are treated as that integer when
/// counting shoulder widths.
pub const INTEGER_RATIO_TOLERANCE: f64 = 1e-9;

/// Closed-form hole sizes on the image plane of the virtual view.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationForecast {
    /// Image-plane meters per world meter of camera displacement.
    pub alpha: f64,
    pub lhat: f64,
    pub baseline: f64,
    pub offset_s: f64,
    /// Hole bounded by the virtual view's offset from `R`.
    pub h_prime: f64,
    /// Hole bounded by the background strip hidden from both cameras; may be
    /// negative.
    pub h_double_prime: f64,
    /// Final hole size after the case split.
    pub h: f64,
}

/// `h = alpha * s` branch: `R` is pinned, `b` only bounded above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetKnown {
    pub s_exact: f64,
    pub b_upper: f64,
}

/// `h = lhat - alpha * b` branch: `b` is pinned, `s` only bounded below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineKnown {
    pub s_lower: f64,
    pub b_exact: f64,
}

/// No hole: the baseline is at least `lhat / alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoHole {
    pub b_lower: f64,
}

/// Everything the observer can conclude from one measurement. Exactly the
/// branches consistent with the measurement are populated: both `case_i` and
/// `case_ii` when a hole is visible, only `no_hole` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackerInference {
    pub alpha: f64,
    pub case_i: Option<OffsetKnown>,
    pub case_ii: Option<BaselineKnown>,
    pub no_hole: Option<NoHole>,
}

/// `alpha = (lhat / l) * (1 - Zo / Zb)`.
pub fn alpha(lhat: f64, l: f64, zo: f64, zb: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(invalid("l", format!("must be positive, got {l}")));
    }
    if !(lhat > 0.0) {
        return Err(invalid("lhat", format!("must be positive, got {lhat}")));
    }
    if !(zo > 0.0 && zo < zb) {
        return Err(Error::DegenerateDepth { zo, zb });
    }
    Ok(lhat / l * (1.0 - zo / zb))
}

/// Applies the hole equations to already-derived quantities. `s` may be zero
/// (virtual view on top of `R`).
pub fn forecast_from_parts(lhat: f64, alpha: f64, baseline: f64, offset_s: f64) -> ExtrapolationForecast {
    let h_prime = alpha * offset_s;
    let h_double_prime = lhat - alpha * baseline;
    let h = if h_double_prime > 0.0 {
        h_prime.min(h_double_prime).max(0.0)
    } else {
        0.0
    };
    ExtrapolationForecast {
        alpha,
        lhat,
        baseline,
        offset_s,
        h_prime,
        h_double_prime,
        h,
    }
}

/// Predicts the hole beside the object for an extrapolated virtual view.
///
/// The object projection `lhat` is obtained from the pinhole model at depth
/// `Zo`.
pub fn forecast_holes(scene: &SceneGeometry, imaging: &ImagingParams) -> Result<ExtrapolationForecast> {
    let mut problems = scene.violations();
    problems.extend(imaging.violations());
    if !problems.is_empty() {
        return Err(Error::InvalidScene(problems));
    }
    let scene = right_extrapolation(scene)?;
    let lhat = project_length(scene.object_length_l, scene.object_distance_zo, imaging)?;
    let a = alpha(
        lhat,
        scene.object_length_l,
        scene.object_distance_zo,
        scene.background_distance_zb,
    )?;
    Ok(forecast_from_parts(
        lhat,
        a,
        scene.baseline(),
        scene.synth_x - scene.right.x,
    ))
}

/// Returns the scene in the "virtual view right of `R`" orientation.
pub fn right_extrapolation(scene: &SceneGeometry) -> Result<SceneGeometry> {
    if scene.synth_x > scene.right.x {
        Ok(*scene)
    } else if scene.synth_x < scene.left.x {
        Ok(scene.mirrored())
    } else {
        Err(Error::NotExtrapolation {
            synth_x: scene.synth_x,
            left_x: scene.left.x,
            right_x: scene.right.x,
        })
    }
}

/// Turns a measured hole into the observer's constraints on `s` and `b`.
pub fn invert_hole(meas: &HoleMeasurement, guess: &ObserverGuess) -> Result<AttackerInference> {
    let h = meas.hole_h;
    let lhat = meas.projection_lhat;
    if !(h >= 0.0) {
        return Err(invalid("hole_h", format!("must be non-negative, got {h}")));
    }
    if h >= lhat {
        return Err(Error::InconsistentMeasurement {
            hole: h,
            projection: lhat,
        });
    }
    let a = alpha(lhat, guess.guessed_l, guess.guessed_zo, guess.guessed_zb)?;
    if h > 0.0 {
        let s = h / a;
        let b = (lhat - h) / a;
        Ok(AttackerInference {
            alpha: a,
            case_i: Some(OffsetKnown {
                s_exact: s,
                b_upper: b,
            }),
            case_ii: Some(BaselineKnown {
                s_lower: s,
                b_exact: b,
            }),
            no_hole: None,
        })
    } else {
        Ok(AttackerInference {
            alpha: a,
            case_i: None,
            case_ii: None,
            no_hole: Some(NoHole { b_lower: lhat / a }),
        })
    }
}

/// `b / l` with near-integers snapped, plus its floor and ceiling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthRatio {
    pub ratio: f64,
    pub floor: u64,
    pub ceil: u64,
}

impl WidthRatio {
    pub fn new(b: f64, l: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(invalid("b", format!("must be positive, got {b}")));
        }
        if !(l > 0.0) {
            return Err(invalid("l", format!("must be positive, got {l}")));
        }
        let ratio = b / l;
        let nearest = ratio.round();
        if nearest >= 1.0 && (ratio - nearest).abs() < INTEGER_RATIO_TOLERANCE {
            let m = nearest as u64;
            return Ok(Self {
                ratio: nearest,
                floor: m,
                ceil: m,
            });
        }
        Ok(Self {
            ratio,
            floor: ratio.floor() as u64,
            ceil: ratio.ceil() as u64,
        })
    }

    pub fn is_integer(&self) -> bool {
        self.floor == self.ceil
    }
}

fn check_line(n: u32, ratio: &WidthRatio) -> Result<()> {
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 photographers, got {n}")));
    }
    if ratio.ceil > u64::from(n) {
        return Err(Error::BaselineExceedsLine {
            cells: ratio.ceil,
            n,
        });
    }
    Ok(())
}

/// Parts of the hole-present suspect count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoleCountParts {
    /// Pairs with `R` pinned and `L` within `b` to its left.
    pub case_i: u64,
    /// Pairs whose separation can equal `b`.
    pub case_ii: u64,
    /// Pairs consistent with both branches at once.
    pub overlap: u64,
}

impl HoleCountParts {
    pub fn total(&self) -> u64 {
        self.case_i + self.case_ii - self.overlap
    }
}

/// Breaks the hole-present count into its two branches and their overlap.
///
/// Camera positions are free within each photographer's shoulder width, so a
/// pair `d` places apart realizes every baseline in `((d - 1) l, (d + 1) l)`.
/// Pairs are labeled positions, so `d = 0` (both cameras within one width)
/// counts when `b < l`.
pub fn hole_count_parts(n: u32, b: f64, l: f64) -> Result<HoleCountParts> {
    let ratio = WidthRatio::new(b, l)?;
    check_line(n, &ratio)?;
    let n64 = u64::from(n);
    let case_i = ratio.ceil.min(n64 - 1);
    let case_ii = (0..n64)
        .filter(|&d| (d as f64 - ratio.ratio).abs() < 1.0)
        .map(|d| n64 - d)
        .sum();
    let overlap = u64::from(ratio.ceil < n64);
    Ok(HoleCountParts {
        case_i,
        case_ii,
        overlap,
    })
}

/// Size of the anonymity set when a hole is visible and `b` has been
/// inferred. For non-integer `b / l` this is `2n - ceil(b / l)`; integer
/// ratios are counted from the branch decomposition.
pub fn suspect_pairs_hole(n: u32, b: f64, l: f64) -> Result<u64> {
    let ratio = WidthRatio::new(b, l)?;
    check_line(n, &ratio)?;
    if ratio.is_integer() {
        Ok(hole_count_parts(n, b, l)?.total())
    } else {
        Ok(2 * u64::from(n) - ratio.ceil)
    }
}

/// Size of the anonymity set when no hole is visible, with `b_threshold =
/// lhat / alpha`. Evaluates the summation over admissible separations term by
/// term.
pub fn suspect_pairs_no_hole(n: u32, b_threshold: f64, l: f64) -> Result<u64> {
    let ratio = WidthRatio::new(b_threshold, l)?;
    check_line(n, &ratio)?;
    let n64 = u64::from(n);
    Ok((0..=n64 - ratio.ceil)
        .map(|k| (n64 - ratio.floor).saturating_sub(k))
        .sum())
}

/// Product form `((n - ceil + 2) / 2) * (n - ceil + 1)` of the no-hole count.
/// Agrees with [`suspect_pairs_no_hole`] only when `b / l` is not an integer.
pub fn suspect_pairs_no_hole_product(n: u32, b_threshold: f64, l: f64) -> Result<f64> {
    let ratio = WidthRatio::new(b_threshold, l)?;
    check_line(n, &ratio)?;
    let m = f64::from(n) - ratio.ceil as f64;
    Ok((m + 2.0) / 2.0 * (m + 1.0))
}
