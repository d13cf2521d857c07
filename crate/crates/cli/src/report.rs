//! One-row analyses and their CSV form.

use veil_core::extrapolation::{forecast_holes, invert_hole, suspect_pairs_hole, suspect_pairs_no_hole};
use veil_core::format::sig9;
use veil_core::interpolation::{classify_and_count, Recovered};
use veil_core::oracle::{enumerate_suspect_pairs, SuspectConstraint};
use veil_core::{anonymity, HoleMeasurement, HoleSide, LoadedScene};

use crate::error::CliResult;

const MM: f64 = 1e3;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationRow {
    pub h_prime: f64,
    pub h_double_prime: f64,
    pub h: f64,
    pub b_inferred: f64,
    pub s_inferred: Option<f64>,
    pub n_susp: u64,
    pub anonymity: f64,
    pub preserved: bool,
    pub case: &'static str,
}

impl ExtrapolationRow {
    pub const HEADER: &'static str =
        "h_prime_mm,h_double_prime_mm,h_mm,b_inferred_m,s_inferred_m,n_susp,anonymity,preserved,case";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            sig9(self.h_prime * MM),
            sig9(self.h_double_prime * MM),
            sig9(self.h * MM),
            sig9(self.b_inferred),
            self.s_inferred.map(sig9).unwrap_or_default(),
            self.n_susp,
            sig9(self.anonymity),
            self.preserved,
            self.case
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationRow {
    pub case: &'static str,
    pub x_l: Recovered,
    pub x_r: Recovered,
    pub h_left: f64,
    pub h_right: f64,
    pub h_total: f64,
    pub n_susp: u64,
    pub anonymity: f64,
    pub preserved: bool,
}

fn recovered(r: Recovered) -> String {
    match r {
        Recovered::Exact(x) => sig9(x),
        Recovered::Between(lo, hi) => format!("{}..{}", sig9(lo), sig9(hi)),
    }
}

impl InterpolationRow {
    pub const HEADER: &'static str =
        "case,x_l_recovered_m,x_r_recovered_m,h_left_mm,h_right_mm,h_total_mm,n_susp,anonymity,preserved";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.case,
            recovered(self.x_l),
            recovered(self.x_r),
            sig9(self.h_left * MM),
            sig9(self.h_right * MM),
            sig9(self.h_total * MM),
            self.n_susp,
            sig9(self.anonymity),
            self.preserved
        )
    }
}

/// Forecasts the hole, inverts it as the observer would and scores the
/// remaining suspects. A `measurement` in the scene overrides the forecast
/// hole. With `prune_with_offset`, the observer also knows where the virtual
/// view sits and suspects are counted by enumeration.
pub fn extrapolation_row(loaded: &LoadedScene, prune_with_offset: bool) -> CliResult<ExtrapolationRow> {
    let forecast = forecast_holes(&loaded.scene, &loaded.imaging)?;
    let measurement = match loaded.measurement {
        Some(m) => m,
        None => HoleMeasurement::new(forecast.h, forecast.lhat, HoleSide::RightOfObject)?,
    };
    let inference = invert_hole(&measurement, &loaded.guess)?;
    let line = loaded.scene.photographer_line;
    let cell = line.spacing;
    let (b_inferred, s_inferred, counted, case) = match (inference.case_i, inference.case_ii, inference.no_hole) {
        (Some(i), Some(ii), _) => (
            ii.b_exact,
            Some(i.s_exact),
            suspect_pairs_hole(line.count_n, ii.b_exact, cell),
            "extrapolation_hole",
        ),
        (_, _, Some(none)) => (
            none.b_lower,
            None,
            suspect_pairs_no_hole(line.count_n, none.b_lower, cell),
            "extrapolation_no_hole",
        ),
        _ => unreachable!("an inference has either both hole branches or the no-hole branch"),
    };
    let n_susp = if prune_with_offset {
        let constraint = SuspectConstraint::Extrapolation {
            inference: &inference,
            synth_x: Some(loaded.scene.synth_x),
        };
        enumerate_suspect_pairs(&line, constraint, cell)?
    } else {
        counted?
    };
    let report = anonymity(line.count_n, n_susp)?;
    Ok(ExtrapolationRow {
        h_prime: forecast.h_prime,
        h_double_prime: forecast.h_double_prime,
        h: measurement.hole_h,
        b_inferred,
        s_inferred,
        n_susp,
        anonymity: report.anonymity_a,
        preserved: report.preserved,
        case,
    })
}

/// Classifies the interpolated setup and scores the remaining suspects.
pub fn interpolation_row(loaded: &LoadedScene) -> CliResult<InterpolationRow> {
    let line = loaded.scene.photographer_line;
    let report = classify_and_count(&loaded.scene, &loaded.profile, &loaded.imaging, line.spacing)?;
    let score = anonymity(line.count_n, report.n_susp)?;
    Ok(InterpolationRow {
        case: report.case.label(),
        x_l: report.x_l_recovered,
        x_r: report.x_r_recovered,
        h_left: report.left_tangent.hole_on_image,
        h_right: report.right_tangent.hole_on_image,
        h_total: report.total_hole,
        n_susp: report.n_susp,
        anonymity: score.anonymity_a,
        preserved: score.preserved,
    })
}
