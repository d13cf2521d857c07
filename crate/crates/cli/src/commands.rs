//! Subcommand bodies. Each returns what goes to standard output, so nothing
//! is printed when a command fails.

use std::fs;
use std::path::Path;

use veil_core::format::sig9;
use veil_core::oracle::Interval;
use veil_core::synthesis::{
    default_max_disparity, ground_truth_disparity, match_disparity, render_scanline,
    SynthesisOutput,
};
use veil_core::{
    cast_occlusions, forecast_holes, load_scene, tangent_from_camera, LoadedScene, ProfileKind,
};

use crate::error::{CliError, CliResult};
use crate::report::{extrapolation_row, interpolation_row, ExtrapolationRow, InterpolationRow};
use crate::svg::{self, Strip};
use crate::sweep::SweepSpec;

/// Agreement tolerance between measured and forecast holes, in pixels.
pub const GROUND_TRUTH_TOLERANCE_PX: f64 = 2.0;
pub const MATCHED_TOLERANCE_PX: f64 = 4.0;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn read_scene(path: &Path) -> CliResult<LoadedScene> {
    Ok(load_scene(&read(path)?)?)
}

pub fn extrapolate(scene: &Path, prune_with_offset: bool) -> CliResult<String> {
    let row = extrapolation_row(&read_scene(scene)?, prune_with_offset)?;
    Ok(format!("{}\n{}\n", ExtrapolationRow::HEADER, row.csv()))
}

pub fn interpolate(scene: &Path) -> CliResult<String> {
    let row = interpolation_row(&read_scene(scene)?)?;
    Ok(format!("{}\n{}\n", InterpolationRow::HEADER, row.csv()))
}

pub fn sweep(spec: &Path, out_csv: &Path, out_svg: &Path, prune_with_offset: bool) -> CliResult<String> {
    let spec = SweepSpec::from_json(&read(spec)?)?;
    let result = spec.run(prune_with_offset)?;
    write(out_csv, &result.to_csv())?;
    write(out_svg, &svg::sweep_plot(&result))?;
    Ok(String::new())
}

pub struct SynthesisOptions {
    pub seed: u64,
    pub window: usize,
    pub max_disp: Option<usize>,
    pub ground_truth: bool,
}

fn scanline_csv(out: &SynthesisOutput) -> String {
    let mut csv = String::from("index,intensity,hole\n");
    for (u, (v, hole)) in out.image.pixels().iter().zip(&out.hole_mask).enumerate() {
        csv.push_str(&format!("{u},{},{}\n", sig9(*v), u8::from(*hole)));
    }
    csv
}

/// Largest hole the closed forms expect on the virtual image, in meters.
fn predicted_hole(loaded: &LoadedScene) -> CliResult<f64> {
    if loaded.object_is_empty() {
        return Ok(0.0);
    }
    if loaded.scene.is_extrapolation() && loaded.profile.kind == ProfileKind::Segment {
        return Ok(forecast_holes(&loaded.scene, &loaded.imaging)?.h);
    }
    let oracle = cast_occlusions(
        &loaded.scene,
        &loaded.profile,
        &loaded.imaging,
        veil_core::oracle::DEFAULT_RESOLUTION,
    )?;
    Ok(oracle.hole_widths_on_image.first().copied().unwrap_or(0.0))
}

pub fn synthesize(scene: &Path, out_dir: &Path, opts: &SynthesisOptions) -> CliResult<String> {
    let loaded = read_scene(scene)?;
    let (s, profile, imaging) = (&loaded.scene, &loaded.profile, &loaded.imaging);
    let left = render_scanline(s, profile, opts.seed, &s.left, imaging)?;
    let right = render_scanline(s, profile, opts.seed, &s.right, imaging)?;
    let disp = if opts.ground_truth {
        ground_truth_disparity(s, profile, imaging)?
    } else {
        let max_disp = match opts.max_disp {
            Some(d) => d,
            None => default_max_disparity(s, profile, imaging)?,
        };
        match_disparity(&left, &right, opts.window, max_disp)?
    };
    let out = veil_core::synthesis::synthesize(&left, &right, &disp, s)?;
    let predicted = predicted_hole(&loaded)?;

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let pitch = imaging.pixel_pitch;
    write(&out_dir.join("left.csv"), &left.to_csv())?;
    write(&out_dir.join("right.csv"), &right.to_csv())?;
    write(&out_dir.join("synth.csv"), &scanline_csv(&out))?;
    write(&out_dir.join("synth_filled.csv"), &out.filled_image.to_csv())?;
    let mut disp_csv = String::from("index,disparity_px,valid\n");
    for (u, (d, ok)) in disp.disparity_px.iter().zip(&disp.valid_mask).enumerate() {
        disp_csv.push_str(&format!("{u},{},{}\n", sig9(*d), u8::from(*ok)));
    }
    write(&out_dir.join("disparity.csv"), &disp_csv)?;
    let mut holes_csv = String::from("rank,width_mm,width_px\n");
    for (k, w) in out.measured_hole_widths.iter().enumerate() {
        holes_csv.push_str(&format!("{},{},{}\n", k + 1, sig9(w * 1e3), sig9(w / pitch)));
    }
    write(&out_dir.join("holes.csv"), &holes_csv)?;
    let strips = svg::strips(&[
        Strip { label: "left", line: &left, holes: None },
        Strip { label: "right", line: &right, holes: None },
        Strip { label: "synthesized", line: &out.image, holes: Some(&out.hole_mask) },
        Strip { label: "filled", line: &out.filled_image, holes: None },
    ]);
    write(&out_dir.join("strips.svg"), &strips)?;

    let measured_px = out.measured_hole_widths.first().copied().unwrap_or(0.0) / pitch;
    let predicted_px = predicted / pitch;
    let tolerance = if opts.ground_truth {
        GROUND_TRUTH_TOLERANCE_PX
    } else {
        MATCHED_TOLERANCE_PX
    };
    let status = if out.measured_hole_widths.is_empty() { "no holes" } else { "holes" };
    let delta = measured_px - predicted_px;
    Ok(format!(
        "status,measured_px,predicted_px,delta_px,tolerance_px,agrees\n{status},{},{},{},{},{}\n",
        sig9(measured_px),
        sig9(predicted_px),
        sig9(delta),
        sig9(tolerance),
        delta.abs() <= tolerance
    ))
}

struct Comparison {
    quantity: &'static str,
    closed_form: f64,
    oracle: f64,
    tolerance: f64,
}

fn total(intervals: &[Interval]) -> f64 {
    intervals.iter().map(Interval::len).sum()
}

/// Prints the oracle's intervals, a blank line, then one row per closed form
/// the scene admits.
pub fn oracle(scene: &Path, resolution: usize) -> CliResult<String> {
    let loaded = read_scene(scene)?;
    let (s, profile, imaging) = (&loaded.scene, &loaded.profile, &loaded.imaging);
    let res = cast_occlusions(s, profile, imaging, resolution)?;

    let mut out = String::from("kind,start_m,end_m,length_m\n");
    let groups = [
        ("background", &res.occluded_background_intervals),
        ("object_both", &res.occluded_object_arcs),
        ("object_from_left", &res.object_hidden_from_left),
        ("object_from_right", &res.object_hidden_from_right),
    ];
    for (kind, intervals) in groups {
        for iv in intervals.iter() {
            out.push_str(&format!("{kind},{},{},{}\n", sig9(iv.start), sig9(iv.end), sig9(iv.len())));
        }
    }

    let mut rows = Vec::new();
    let oracle_hole = res.hole_widths_on_image.first().copied().unwrap_or(0.0);
    if loaded.object_is_empty() {
        rows.push(Comparison {
            quantity: "occluded_background_m",
            closed_form: 0.0,
            oracle: res.occluded_background_length(),
            tolerance: res.ray_spacing,
        });
        rows.push(Comparison {
            quantity: "hole_mm",
            closed_form: 0.0,
            oracle: oracle_hole * 1e3,
            tolerance: res.image_spacing * 1e3,
        });
    } else if profile.kind == ProfileKind::Segment {
        // shadows of the segment scale by Zb / Zo and overlap by w k - b (k - 1)
        let k = s.background_distance_zb / s.object_distance_zo;
        let width = 2.0 * profile.half_support_xf;
        rows.push(Comparison {
            quantity: "occluded_background_m",
            closed_form: (width * k - s.baseline() * (k - 1.0)).max(0.0),
            oracle: res.occluded_background_length(),
            tolerance: 2.0 * res.ray_spacing,
        });
        if s.is_extrapolation() {
            rows.push(Comparison {
                quantity: "hole_mm",
                closed_form: forecast_holes(s, imaging)?.h * 1e3,
                oracle: oracle_hole * 1e3,
                tolerance: res.image_spacing * 1e3,
            });
        }
    } else {
        let zo = s.object_distance_zo;
        let left = tangent_from_camera(s.left.x, zo, profile, imaging)?;
        let right = tangent_from_camera(s.right.x, zo, profile, imaging)?;
        rows.push(Comparison {
            quantity: "hidden_from_left_m",
            closed_form: left.occlusion_h,
            oracle: total(&res.object_hidden_from_left),
            tolerance: 2.0 * res.profile_spacing,
        });
        rows.push(Comparison {
            quantity: "hidden_from_right_m",
            closed_form: right.occlusion_h,
            oracle: total(&res.object_hidden_from_right),
            tolerance: 2.0 * res.profile_spacing,
        });
    }

    out.push_str("\nquantity,closed_form,oracle,delta,tolerance,agrees\n");
    for c in rows {
        let delta = c.oracle - c.closed_form;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.quantity,
            sig9(c.closed_form),
            sig9(c.oracle),
            sig9(delta),
            sig9(c.tolerance),
            delta.abs() <= c.tolerance
        ));
    }
    Ok(out)
}
