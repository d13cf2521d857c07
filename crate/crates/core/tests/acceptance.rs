//! Acceptance checks, one PASS/FAIL line per criterion. Tolerances and time
//! budgets are fixed here.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use veil_core::extrapolation::{BaselineKnown, NoHole, OffsetKnown};
use veil_core::oracle::{SuspectConstraint, DEFAULT_RESOLUTION};
use veil_core::scene::press_conference;
use veil_core::synthesis::{
    default_max_disparity, ground_truth_disparity, match_disparity, render_scanline, synthesize,
    DEFAULT_WINDOW,
};
use veil_core::{
    anonymity, cast_occlusions, classify_and_count, enumerate_suspect_pairs, forecast_holes,
    invert_hole, recover_camera_x, suspect_pairs_hole, suspect_pairs_no_hole, tangent_from_camera,
    validate_scene, AnonymityReport, AttackerInference, CameraPose, Error, HoleMeasurement,
    HoleSide, ImagingParams, InterpolationCase, ObjectProfile, ObserverGuess, PhotographerLine,
    SceneGeometry,
};

const ANONYMITY_TOL: f64 = 1e-3;
const BASELINE_REL_TOL: f64 = 1e-9;
const RECOVERY_REL_TOL: f64 = 1e-6;
const TANGENCY_TOL: f64 = 1e-9;
const GROUND_TRUTH_PX: f64 = 2.0;
const MATCHED_PX: f64 = 4.0;
const FUZZED_SCENES: usize = 1000;
const FUZZED_TANGENTS: usize = 10_000;
const SEED: u64 = 1;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:?}, budget {budget:?}"))
}

fn segment_for(scene: &SceneGeometry) -> ObjectProfile {
    ObjectProfile::segment(scene.object_length_l)
}

/// Measurement, inversion, counting and scoring for the press-conference
/// numbers.
fn pipeline(h: f64) -> veil_core::Result<(AttackerInference, u64, AnonymityReport)> {
    let (scene, imaging) = press_conference(1.4, 0.5);
    let guess = ObserverGuess::exact(&scene, &imaging);
    let meas = HoleMeasurement::new(h, 0.005, HoleSide::RightOfObject)?;
    let inf = invert_hole(&meas, &guess)?;
    let line = scene.photographer_line;
    let n_susp = match (inf.case_ii, inf.no_hole) {
        (Some(ii), _) => suspect_pairs_hole(line.count_n, ii.b_exact, line.spacing)?,
        (None, Some(nh)) => suspect_pairs_no_hole(line.count_n, nh.b_lower, line.spacing)?,
        _ => unreachable!(),
    };
    Ok((inf, n_susp, anonymity(line.count_n, n_susp)?))
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let (_, _, hole) = pipeline(0.001).map_err(|e| e.to_string())?;
    let (_, _, none) = pipeline(0.0).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure((hole.anonymity_a - 0.688).abs() <= ANONYMITY_TOL, || format!("A(h>0) = {}", hole.anonymity_a))?;
    ensure((none.anonymity_a - 0.958).abs() <= ANONYMITY_TOL, || format!("A(h=0) = {}", none.anonymity_a))?;
    within_budget(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "A = {:.6} / {:.6} in {elapsed:?}",
        hole.anonymity_a, none.anonymity_a
    ))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_2() -> Check {
    let (hole, n_hole, _) = pipeline(0.001).map_err(|e| e.to_string())?;
    let (none, n_none, _) = pipeline(0.0).map_err(|e| e.to_string())?;
    let b = hole.case_ii.ok_or("no baseline branch")?.b_exact;
    let threshold = none.no_hole.ok_or("no no-hole branch")?.b_lower;
    ensure(rel(b, 1.4) <= BASELINE_REL_TOL, || format!("b = {b}"))?;
    ensure(rel(threshold, 1.75) <= BASELINE_REL_TOL, || format!("threshold = {threshold}"))?;
    ensure(n_hole == 37 && n_none == 153, || format!("closed-form counts {n_hole}, {n_none}"))?;
    let (scene, _) = press_conference(1.4, 0.5);
    let line = scene.photographer_line;
    let count = |inf| {
        enumerate_suspect_pairs(&line, SuspectConstraint::Extrapolation { inference: inf, synth_x: None }, line.spacing)
    };
    let (e_hole, e_none) = (count(&hole).map_err(|e| e.to_string())?, count(&none).map_err(|e| e.to_string())?);
    ensure(e_hole == 37 && e_none == 153, || format!("enumerated counts {e_hole}, {e_none}"))?;
    Ok(format!("b = {b}, threshold = {threshold}, N_susp = {n_hole}/{n_none} (enumeration agrees)"))
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: S) -> S::Value {
    s.new_tree(runner).expect("strategy yields a value").current()
}

fn fuzzed_extrapolation(runner: &mut TestRunner) -> (SceneGeometry, ImagingParams) {
    let (zb, depth_frac, l, b, s, centre, f, mirror) = sample(
        runner,
        (
            2.0f64..20.0,
            0.1f64..0.9,
            0.1f64..1.0,
            0.05f64..3.0,
            0.01f64..3.0,
            -1.0f64..1.0,
            0.02f64..0.1,
            proptest::bool::ANY,
        ),
    );
    let left_x = centre - b / 2.0;
    let right_x = left_x + b;
    let scene = SceneGeometry {
        left: CameraPose::new(left_x, zb),
        right: CameraPose::new(right_x, zb),
        synth_x: if mirror { left_x - s } else { right_x + s },
        object_length_l: l,
        object_distance_zo: zb * depth_frac,
        background_distance_zb: zb,
        photographer_line: PhotographerLine::packed(-50.0, 200, 0.5),
    };
    (scene, ImagingParams::full_frame(f, 2048))
}

fn criterion_3() -> Check {
    let mut runner = TestRunner::deterministic();
    let mut violations = Vec::new();
    let mut holes = 0;
    let mut worst = 0.0f64;
    for k in 0..FUZZED_SCENES {
        let (scene, imaging) = fuzzed_extrapolation(&mut runner);
        validate_scene(&scene, &imaging).into_result().map_err(|e| format!("scene {k}: {e}"))?;
        let closed = forecast_holes(&scene, &imaging).map_err(|e| e.to_string())?.h;
        let res = cast_occlusions(&scene, &segment_for(&scene), &imaging, DEFAULT_RESOLUTION)
            .map_err(|e| e.to_string())?;
        let oracle = res.hole_widths_on_image.first().copied().unwrap_or(0.0);
        holes += usize::from(closed > 0.0);
        let err = (closed - oracle).abs() / res.image_spacing;
        worst = worst.max(err);
        if err > 1.0 {
            violations.push(format!("scene {k}: closed {closed:.6e}, oracle {oracle:.6e}, {err:.2} spacings"));
        }
    }
    ensure(violations.is_empty(), || {
        format!("{} violations, first: {}", violations.len(), violations[0])
    })?;
    Ok(format!(
        "{FUZZED_SCENES} scenes ({holes} with holes), worst error {worst:.3} ray spacings"
    ))
}

fn criterion_4() -> Check {
    let t = Instant::now();
    let l = 0.5;
    let ratios = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, std::f64::consts::PI];
    let mut checked = 0;
    for n in 3u32..=30 {
        let line = PhotographerLine::packed(0.0, n, l);
        let top = f64::from(n - 1);
        for ratio in ratios {
            // ratios too wide for a short line are scaled so pi lands on n - 1
            let ratio = if ratio > top { ratio * top / std::f64::consts::PI } else { ratio };
            let b = ratio * l;
            let hole = AttackerInference {
                alpha: 1.0,
                case_i: Some(OffsetKnown { s_exact: 0.1, b_upper: b }),
                case_ii: Some(BaselineKnown { s_lower: 0.1, b_exact: b }),
                no_hole: None,
            };
            let none = AttackerInference {
                alpha: 1.0,
                case_i: None,
                case_ii: None,
                no_hole: Some(NoHole { b_lower: b }),
            };
            let enumerate = |inf: &AttackerInference| {
                enumerate_suspect_pairs(&line, SuspectConstraint::Extrapolation { inference: inf, synth_x: None }, l)
            };
            let pairs = [
                ("hole", suspect_pairs_hole(n, b, l), enumerate(&hole)),
                ("no hole", suspect_pairs_no_hole(n, b, l), enumerate(&none)),
            ];
            for (which, closed, brute) in pairs {
                ensure(closed == brute, || {
                    format!("n = {n}, b/l = {ratio}: {which} closed {closed:?} vs enumeration {brute:?}")
                })?;
                checked += 1;
            }
        }
    }
    let elapsed = t.elapsed();
    within_budget(elapsed, Duration::from_secs(10))?;
    Ok(format!("{checked} comparisons, zero violations, {elapsed:?}"))
}

fn interpolation_scene(x_l: f64, x_r: f64) -> (SceneGeometry, ImagingParams) {
    let (mut scene, imaging) = press_conference(1.4, 0.5);
    scene.left.x = x_l;
    scene.right.x = x_r;
    scene.synth_x = 0.5 * (x_l + x_r);
    (scene, imaging)
}

fn criterion_5() -> Check {
    let (scene, imaging) = interpolation_scene(-1.0, 1.0);
    let profile = ObjectProfile::circle_cap(0.25, 0.25);
    let report = classify_and_count(&scene, &profile, &imaging, 0.5).map_err(|e| e.to_string())?;
    ensure(report.case == InterpolationCase::OppositeSides, || format!("case {}", report.case.label()))?;
    let x_l = report.x_l_recovered.exact().ok_or("x_L not pinned")?;
    let x_r = report.x_r_recovered.exact().ok_or("x_R not pinned")?;
    ensure(rel(x_l, -1.0) <= RECOVERY_REL_TOL && rel(x_r, 1.0) <= RECOVERY_REL_TOL, || {
        format!("recovered {x_l}, {x_r}")
    })?;
    let a = anonymity(scene.photographer_line.count_n, report.n_susp).map_err(|e| e.to_string())?;
    ensure(a.anonymity_a == 0.0, || format!("A = {}", a.anonymity_a))?;
    Ok(format!("x_L = {x_l}, x_R = {x_r}, A = 0"))
}

fn criterion_6() -> Check {
    let mut runner = TestRunner::deterministic();
    let imaging = ImagingParams::full_frame(0.05, 2048);
    let (mut worst_rel, mut worst_tan) = (0.0f64, 0.0f64);
    let (mut accepted, mut shallow) = (0usize, 0usize);
    while accepted < FUZZED_TANGENTS {
        let (cx, zo, r) = sample(&mut runner, (-5.0f64..5.0, 0.5f64..20.0, 0.01f64..0.5));
        let profile = ObjectProfile::circle_cap(r, r);
        let tan = match tangent_from_camera(cx, zo, &profile, &imaging) {
            Ok(t) => t,
            Err(Error::ShallowCamera { .. }) => {
                shallow += 1;
                continue;
            }
            Err(e) => return Err(format!("({cx}, {zo}, {r}): {e}")),
        };
        accepted += 1;
        let on_circle = (tan.tangent_x.hypot(tan.tangent_z) - r).abs();
        let (dx, dz) = (tan.tangent_x - cx, tan.tangent_z - zo);
        let distance = (cx * dz - zo * dx).abs() / dx.hypot(dz);
        let tangency = on_circle.max((distance - r).abs());
        worst_tan = worst_tan.max(tangency);
        let back = recover_camera_x(&tan, zo).map_err(|e| e.to_string())?;
        let err = if cx == 0.0 { back.abs() } else { rel(back, cx) };
        worst_rel = worst_rel.max(err);
        ensure(tangency <= TANGENCY_TOL, || format!("({cx}, {zo}, {r}): tangency off by {tangency:e}"))?;
        ensure(err <= RECOVERY_REL_TOL, || format!("({cx}, {zo}, {r}): recovered {back}"))?;
    }
    Ok(format!(
        "{accepted} triples ({shallow} shallow skipped), worst round trip {worst_rel:.2e}, worst tangency {worst_tan:.2e}"
    ))
}

/// Largest interior hole in pixels for the given disparity source.
fn synthesized_hole_px(scene: &SceneGeometry, imaging: &ImagingParams, ground_truth: bool) -> veil_core::Result<f64> {
    let profile = segment_for(scene);
    let left = render_scanline(scene, &profile, SEED, &scene.left, imaging)?;
    let right = render_scanline(scene, &profile, SEED, &scene.right, imaging)?;
    let disp = if ground_truth {
        ground_truth_disparity(scene, &profile, imaging)?
    } else {
        let max_disp = default_max_disparity(scene, &profile, imaging)?;
        match_disparity(&left, &right, DEFAULT_WINDOW, max_disp)?
    };
    let out = synthesize(&left, &right, &disp, scene)?;
    Ok(out.measured_hole_widths.first().copied().unwrap_or(0.0) / imaging.pixel_pitch)
}

fn criterion_7() -> Check {
    let (scene, imaging) = press_conference(1.4, 0.5);
    let predicted = forecast_holes(&scene, &imaging).map_err(|e| e.to_string())?.h / imaging.pixel_pitch;
    let t = Instant::now();
    let exact = synthesized_hole_px(&scene, &imaging, true).map_err(|e| e.to_string())?;
    let matched = synthesized_hole_px(&scene, &imaging, false).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure((exact - predicted).abs() <= GROUND_TRUTH_PX, || format!("ground truth {exact} px vs {predicted:.2} px"))?;
    ensure((matched - predicted).abs() <= MATCHED_PX, || format!("matched {matched} px vs {predicted:.2} px"))?;
    within_budget(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "forecast {predicted:.2} px, ground truth {exact:.2} px, matched {matched:.2} px, width {} in {elapsed:?}",
        imaging.width_px()
    ))
}

fn criterion_8() -> Check {
    let (scene, imaging) = press_conference(1.4, 0.0);
    ensure(scene.synth_x == scene.right.x, || "virtual view not at R".to_owned())?;
    let profile = segment_for(&scene);
    let run = || -> veil_core::Result<(usize, usize)> {
        let left = render_scanline(&scene, &profile, SEED, &scene.left, &imaging)?;
        let right = render_scanline(&scene, &profile, SEED, &scene.right, &imaging)?;
        let max_disp = default_max_disparity(&scene, &profile, &imaging)?;
        let disp = match_disparity(&left, &right, DEFAULT_WINDOW, max_disp)?;
        let out = synthesize(&left, &right, &disp, &scene)?;
        let written: Vec<usize> = (0..imaging.width_px()).filter(|&u| !out.hole_mask[u]).collect();
        let exact = written
            .iter()
            .filter(|&&u| out.image.pixels()[u].to_bits() == right.pixels()[u].to_bits())
            .count();
        Ok((written.len(), exact))
    };
    let (written, exact) = run().map_err(|e| e.to_string())?;
    ensure(written > 0 && exact == written, || format!("{exact} of {written} pixels bit-exact"))?;
    Ok(format!("{exact} of {written} written pixels bit-identical to the right row"))
}

fn criterion_9() -> Check {
    let (scene, imaging) = press_conference(1.4, 0.5);
    let f = forecast_holes(&scene, &imaging).map_err(|e| e.to_string())?;
    let boundary = f.lhat / f.alpha;
    let mut lines = Vec::new();
    for extra in [0.0, 0.05, 0.25, 0.6] {
        let b = boundary + extra;
        let (scene, imaging) = press_conference(b, 0.5);
        let closed = forecast_holes(&scene, &imaging).map_err(|e| e.to_string())?.h;
        let res = cast_occlusions(&scene, &segment_for(&scene), &imaging, DEFAULT_RESOLUTION)
            .map_err(|e| e.to_string())?;
        let occluded = res.occluded_background_length();
        let exact = synthesized_hole_px(&scene, &imaging, true).map_err(|e| e.to_string())?;
        let matched = synthesized_hole_px(&scene, &imaging, false).map_err(|e| e.to_string())?;
        ensure(closed == 0.0, || format!("b = {b}: closed-form h = {closed}"))?;
        ensure(occluded == 0.0, || format!("b = {b}: oracle occludes {occluded} m"))?;
        ensure(exact == 0.0 && matched == 0.0, || {
            format!("b = {b}: synthesis holes {exact} px (exact), {matched} px (matched)")
        })?;
        lines.push(format!("{b:.3}"));
    }
    Ok(format!(
        "b in [{}] m (boundary l^/alpha = {boundary:.3}): h = 0, no occlusion, no holes",
        lines.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("worked example anonymity", criterion_1),
        ("worked example intermediates", criterion_2),
        ("extrapolation oracle equivalence", criterion_3),
        ("counting oracle equivalence", criterion_4),
        ("interpolation opposite sides", criterion_5),
        ("tangent round trip", criterion_6),
        ("end-to-end synthesis", criterion_7),
        ("right endpoint bit-exact", criterion_8),
        ("no-hole regime boundary", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let elapsed = t.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{elapsed:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail} [{elapsed:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
