//! Brute-force ground truth for the closed forms.
//!
//! [`cast_occlusions`] samples points on the background and on the object
//! surface and tests line of sight to every camera. It shares no algebra with
//! the hole equations: a point is occluded when the straight segment from the
//! camera to it passes through the object. [`enumerate_suspect_pairs`] counts
//! photographer pairs by checking every pair of shoulder-width cells against
//! the observer's constraints.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::extrapolation::AttackerInference;
use crate::interpolation::{InterpolationCase, InterpolationCaseReport, Recovered};
use crate::scene::{ImagingParams, ObjectProfile, PhotographerLine, ProfileKind, SceneGeometry};

/// Default number of background rays.
pub const DEFAULT_RESOLUTION: usize = 100_000;

const MIN_RESOLUTION: usize = 100;

/// Closed interval `[start, end]` in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcclusionResult {
    /// Background stretches hidden from both real cameras.
    pub occluded_background_intervals: Vec<Interval>,
    /// Stretches of the object support (by `x`) hidden from both cameras.
    pub occluded_object_arcs: Vec<Interval>,
    /// Stretches of the object support hidden from the left camera.
    pub object_hidden_from_left: Vec<Interval>,
    /// Stretches of the object support hidden from the right camera.
    pub object_hidden_from_right: Vec<Interval>,
    /// Image-plane widths of background holes seen by the virtual view,
    /// largest first.
    pub hole_widths_on_image: Vec<f64>,
    /// Spacing of the background samples.
    pub ray_spacing: f64,
    /// `ray_spacing` projected onto the virtual view's image plane.
    pub image_spacing: f64,
    /// Spacing of the samples along the object support.
    pub profile_spacing: f64,
}

impl OcclusionResult {
    pub fn total_hole_on_image(&self) -> f64 {
        self.hole_widths_on_image.iter().sum()
    }

    pub fn occluded_background_length(&self) -> f64 {
        self.occluded_background_intervals.iter().map(Interval::len).sum()
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    x: f64,
    depth: f64,
}

/// True when the segment `a -> b` passes strictly inside the disk. Touching
/// the boundary does not count.
fn segment_enters_disk(a: Point, b: Point, center: Point, r: f64) -> bool {
    let (dx, dz) = (b.x - a.x, b.depth - a.depth);
    let (ox, oz) = (a.x - center.x, a.depth - center.depth);
    let len2 = dx * dx + dz * dz;
    if len2 == 0.0 {
        return ox * ox + oz * oz < r * r;
    }
    let u = (-(ox * dx + oz * dz) / len2).clamp(0.0, 1.0);
    let (qx, qz) = (ox + u * dx, oz + u * dz);
    qx * qx + qz * qz < r * r * (1.0 - 1e-12)
}

/// The object as an occluder: a flat plate on `depth = Zo` spanning
/// `[-X_F, X_F]`, plus for a circle cap the half disk bulging towards the
/// cameras.
#[derive(Debug, Clone, Copy)]
struct Occluder {
    plate_half: f64,
    plate_depth: f64,
    disk_r: Option<f64>,
}

impl Occluder {
    fn new(profile: &ObjectProfile, zo: f64) -> Self {
        Self {
            plate_half: profile.half_support_xf.max(0.0),
            plate_depth: zo,
            disk_r: (profile.kind == ProfileKind::CircleCap && profile.radius_r > 0.0)
                .then_some(profile.radius_r),
        }
    }

    fn center(&self) -> Point {
        Point {
            x: 0.0,
            depth: self.plate_depth,
        }
    }

    /// Line of sight from a camera on the focal plane to a point behind the
    /// object plane.
    fn blocks_far_point(&self, camera_x: f64, target: Point) -> bool {
        let crossing = Point {
            x: camera_x + (target.x - camera_x) * self.plate_depth / target.depth,
            depth: self.plate_depth,
        };
        if crossing.x.abs() < self.plate_half {
            return true;
        }
        let camera = Point {
            x: camera_x,
            depth: 0.0,
        };
        self.disk_r
            .is_some_and(|r| segment_enters_disk(camera, crossing, self.center(), r))
    }

    /// Line of sight from a camera to a point on the object surface.
    fn blocks_surface_point(&self, camera_x: f64, target: Point) -> bool {
        let camera = Point {
            x: camera_x,
            depth: 0.0,
        };
        self.disk_r
            .is_some_and(|r| segment_enters_disk(camera, target, self.center(), r))
    }

    fn surface_point(&self, x: f64) -> Point {
        let bulge = match self.disk_r {
            Some(r) if x.abs() <= r => (r * r - x * x).max(0.0).sqrt(),
            _ => 0.0,
        };
        Point {
            x,
            depth: self.plate_depth - bulge,
        }
    }
}

/// Groups consecutive flagged samples into intervals. Each sample stands for
/// a cell of width `spacing` centered on it.
fn runs(samples: &[f64], flags: &[bool], spacing: f64) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &on) in flags.iter().enumerate() {
        match (on, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push(Interval {
                    start: samples[s] - spacing / 2.0,
                    end: samples[i - 1] + spacing / 2.0,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Interval {
            start: samples[s] - spacing / 2.0,
            end: samples[flags.len() - 1] + spacing / 2.0,
        });
    }
    out
}

fn background_extent(scene: &SceneGeometry, occ: &Occluder) -> (f64, f64) {
    let cams = [scene.left.x, scene.right.x, scene.synth_x];
    let zb = scene.background_distance_zb;
    let reach = occ.plate_half.max(occ.disk_r.unwrap_or(0.0));
    let project = |c: f64, x: f64| c + (x - c) * zb / scene.object_distance_zo;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in cams {
        for x in [-reach, reach, c] {
            let p = project(c, x);
            lo = lo.min(p);
            hi = hi.max(p);
        }
    }
    let pad = 0.05 * (hi - lo).max(1.0);
    (lo - pad, hi + pad)
}

/// Ray-casts the scene at `resolution` samples across the background and
/// along the object support.
///
/// The object is described by `profile` alone, so a zero-width segment
/// models an empty scene. Fields of view are unlimited.
pub fn cast_occlusions(
    scene: &SceneGeometry,
    profile: &ObjectProfile,
    imaging: &ImagingParams,
    resolution: usize,
) -> Result<OcclusionResult> {
    if resolution < MIN_RESOLUTION {
        return Err(invalid(
            "resolution",
            format!("need at least {MIN_RESOLUTION} rays, got {resolution}"),
        ));
    }
    let mut problems = scene.violations();
    problems.extend(imaging.violations());
    if !problems.is_empty() {
        return Err(Error::InvalidScene(problems));
    }
    let occ = Occluder::new(profile, scene.object_distance_zo);
    let zb = scene.background_distance_zb;
    let (x_l, x_r, x_s) = (scene.left.x, scene.right.x, scene.synth_x);

    let (lo, hi) = background_extent(scene, &occ);
    let spacing = (hi - lo) / resolution as f64;
    let samples: Vec<f64> = (0..resolution)
        .map(|i| lo + (i as f64 + 0.5) * spacing)
        .collect();
    let visibility: Vec<(bool, bool)> = samples
        .par_iter()
        .map(|&x| {
            let p = Point { x, depth: zb };
            let hidden = occ.blocks_far_point(x_l, p) && occ.blocks_far_point(x_r, p);
            (hidden, hidden && !occ.blocks_far_point(x_s, p))
        })
        .collect();
    let hidden: Vec<bool> = visibility.iter().map(|v| v.0).collect();
    let holes: Vec<bool> = visibility.iter().map(|v| v.1).collect();
    let scale = imaging.focal_length_f / zb;
    let mut hole_widths_on_image: Vec<f64> = runs(&samples, &holes, spacing)
        .iter()
        .map(|iv| iv.len() * scale)
        .collect();
    hole_widths_on_image.sort_by(|a, b| b.total_cmp(a));

    let (object_hidden_from_left, object_hidden_from_right, occluded_object_arcs, profile_spacing) =
        if occ.plate_half > 0.0 {
            let ps = 2.0 * occ.plate_half / resolution as f64;
            let xs: Vec<f64> = (0..resolution)
                .map(|i| -occ.plate_half + (i as f64 + 0.5) * ps)
                .collect();
            let flags: Vec<(bool, bool)> = xs
                .par_iter()
                .map(|&x| {
                    let p = occ.surface_point(x);
                    (
                        occ.blocks_surface_point(x_l, p),
                        occ.blocks_surface_point(x_r, p),
                    )
                })
                .collect();
            let from_l: Vec<bool> = flags.iter().map(|f| f.0).collect();
            let from_r: Vec<bool> = flags.iter().map(|f| f.1).collect();
            let both: Vec<bool> = flags.iter().map(|f| f.0 && f.1).collect();
            (
                runs(&xs, &from_l, ps),
                runs(&xs, &from_r, ps),
                runs(&xs, &both, ps),
                ps,
            )
        } else {
            (Vec::new(), Vec::new(), Vec::new(), 0.0)
        };

    Ok(OcclusionResult {
        occluded_background_intervals: runs(&samples, &hidden, spacing),
        occluded_object_arcs,
        object_hidden_from_left,
        object_hidden_from_right,
        hole_widths_on_image,
        ray_spacing: spacing,
        image_spacing: spacing * scale,
        profile_spacing,
    })
}

/// What the observer knows when counting suspects.
#[derive(Debug, Clone, Copy)]
pub enum SuspectConstraint<'a> {
    /// Extrapolated view. With `synth_x = None` the offset `s` prunes nothing
    /// and `R` is placed where it leaves the most suspects. With a known
    /// `synth_x`, `s` is used to prune; this sharper attack is an extension.
    Extrapolation {
        inference: &'a AttackerInference,
        synth_x: Option<f64>,
    },
    Interpolation(&'a InterpolationCaseReport),
    /// Offset `s` and baseline `b` both known exactly.
    Pinned { synth_x: f64, s: f64, b: f64 },
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r
    } else {
        v
    }
}

/// Counts photographer pairs consistent with `constraint`.
///
/// Photographer `k` occupies the shoulder-width cell `[k l, (k + 1) l)` and
/// may hold a camera anywhere inside it. Pairs are labeled `(L, R)` cells with
/// `L` not right of `R`; a single cell can host both cameras when they are
/// less than `l` apart. When a hole is visible the two branches are counted
/// separately and pairs consistent with both branches at once are removed
/// once.
pub fn enumerate_suspect_pairs(
    line: &PhotographerLine,
    constraint: SuspectConstraint<'_>,
    l: f64,
) -> Result<u64> {
    if !(l > 0.0) {
        return Err(invalid("l", format!("must be positive, got {l}")));
    }
    let count = match constraint {
        SuspectConstraint::Extrapolation { inference, synth_x } => {
            let violations = line.violations();
            if !violations.is_empty() {
                return Err(Error::InvalidScene(violations));
            }
            count_extrapolation(line, inference, synth_x, l)
        }
        SuspectConstraint::Interpolation(report) => count_interpolation(report, l),
        SuspectConstraint::Pinned { synth_x, s, b } => {
            let n = i64::from(line.count_n);
            let r_pos = snap((synth_x - s - line.p_x) / l);
            let l_pos = snap(r_pos - b / l);
            let in_cell = |pos: f64, cell: i64| pos >= cell as f64 && pos < (cell + 1) as f64;
            (0..n)
                .flat_map(|j| (0..=j).map(move |i| (i, j)))
                .filter(|&(i, j)| in_cell(r_pos, j) && in_cell(l_pos, i))
                .count() as u64
        }
    };
    if count == 0 {
        Err(Error::EmptySuspectSet)
    } else {
        Ok(count)
    }
}

fn count_extrapolation(
    line: &PhotographerLine,
    inference: &AttackerInference,
    synth_x: Option<f64>,
    l: f64,
) -> u64 {
    let n = i64::from(line.count_n);
    let pairs = || (0..n).flat_map(move |j| (0..=j).map(move |i| (i, j)));
    // R's position in cell units; worst case puts it on the left edge of the
    // rightmost cell
    let r_pos = |s_exact: f64| match synth_x {
        Some(xs) => snap((xs - s_exact - line.p_x) / l),
        None => (n - 1) as f64,
    };
    let in_cell = |pos: f64, cell: i64| pos >= cell as f64 && pos < (cell + 1) as f64;

    if let Some(nh) = inference.no_hole {
        let beta = snap(nh.b_lower / l);
        return pairs()
            .filter(|&(i, j)| ((j - i + 1) as f64) > beta)
            .count() as u64;
    }

    let mut total = 0i64;
    if let Some(ci) = inference.case_i {
        let beta = snap(ci.b_upper / l);
        let rp = r_pos(ci.s_exact);
        total += pairs()
            .filter(|&(i, j)| in_cell(rp, j) && (i as f64) < rp && ((i + 1) as f64) > rp - beta)
            .count() as i64;
    }
    if let Some(cii) = inference.case_ii {
        let beta = snap(cii.b_exact / l);
        let r_limit = synth_x.map(|xs| snap((xs - cii.s_lower - line.p_x) / l));
        total += pairs()
            .filter(|&(i, j)| {
                // x_R in cell j, x_L = x_R - beta in cell i, x_R below the limit
                let lo = (j as f64).max(i as f64 + beta);
                let mut hi = ((j + 1) as f64).min((i + 1) as f64 + beta);
                if let Some(lim) = r_limit {
                    hi = hi.min(lim);
                }
                lo < hi
            })
            .count() as i64;
        if let Some(ci) = inference.case_i {
            let rp = r_pos(ci.s_exact);
            let joint = pairs()
                .filter(|&(i, j)| in_cell(rp, j) && in_cell(snap(rp - beta), i))
                .count() as i64;
            total -= joint;
        }
    }
    total.max(0) as u64
}

fn count_interpolation(report: &InterpolationCaseReport, l: f64) -> u64 {
    let cell = |x: f64| snap(x / l).floor() as i64;
    match (report.case, report.x_l_recovered, report.x_r_recovered) {
        (InterpolationCase::OppositeSides, Recovered::Exact(xl), Recovered::Exact(xr)) => {
            let (ci, cj) = (cell(xl), cell(xr));
            let span = ci.abs().max(cj.abs()) + 2;
            (-span..span)
                .flat_map(|j| (-span..=j).map(move |i| (i, j)))
                .filter(|&(i, j)| i == ci && j == cj)
                .count() as u64
        }
        (InterpolationCase::BothRight, Recovered::Between(lo, _), Recovered::Exact(xr)) => {
            let rp = snap(xr / l);
            let lo = snap(lo / l);
            let j = rp.floor() as i64;
            (0..=j)
                .filter(|&i| (i as f64) < rp && ((i + 1) as f64) > lo)
                .count() as u64
        }
        (InterpolationCase::BothLeft, Recovered::Exact(xl), Recovered::Between(_, hi)) => {
            // mirror image of the right-hand case
            let rp = snap(-xl / l);
            let lo = snap(-hi / l);
            let j = rp.floor() as i64;
            (0..=j)
                .filter(|&i| (i as f64) < rp && ((i + 1) as f64) > lo)
                .count() as u64
        }
        _ => 0,
    }
}
