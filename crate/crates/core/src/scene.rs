//! Plan-view scene description shared by every analysis.
//!
//! All world quantities are in meters. Depths are measured from the focal
//! plane (where the cameras and photographers stand) towards the background.
//! The object is centered on `x = 0`. Image-plane quantities are also in
//! meters; the CLI converts to millimeters for display.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default sensor width: a full-frame 36 x 24 mm sensor.
pub const FULL_FRAME_SENSOR_WIDTH: f64 = 0.036;

/// A camera in plan view.
///
/// `z` is the camera's distance from the background plane along the optical
/// axis, so a camera standing on the focal plane has `z == Zb`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraPose {
    pub x: f64,
    pub z: f64,
}

impl CameraPose {
    pub fn new(x: f64, z: f64) -> Self {
        Self { x, z }
    }
}

/// Section of the focal plane occupied by `count_n` photographers standing
/// shoulder to shoulder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotographerLine {
    pub p_x: f64,
    pub q_x: f64,
    pub count_n: u32,
    pub spacing: f64,
}

impl PhotographerLine {
    /// A line of `n` photographers of width `spacing` starting at `p_x`.
    pub fn packed(p_x: f64, n: u32, spacing: f64) -> Self {
        Self {
            p_x,
            q_x: p_x + f64::from(n) * spacing,
            count_n: n,
            spacing,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.p_x < self.q_x) {
            out.push("photographer line must satisfy p_x < q_x".to_owned());
        }
        if self.count_n < 2 {
            out.push("photographer line needs at least 2 photographers".to_owned());
        }
        if !(self.spacing > 0.0) {
            out.push("photographer spacing must be positive".to_owned());
        } else if self.count_n >= 2 {
            let needed = f64::from(self.count_n - 1) * self.spacing;
            if self.q_x - self.p_x < needed * (1.0 - 1e-12) {
                out.push(format!(
                    "photographer line of length {} cannot hold {} photographers at spacing {}",
                    self.q_x - self.p_x,
                    self.count_n,
                    self.spacing
                ));
            }
        }
        out
    }
}

/// Geometry of the two real cameras, the virtual viewpoint, the object and
/// the background.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneGeometry {
    pub left: CameraPose,
    pub right: CameraPose,
    pub synth_x: f64,
    pub object_length_l: f64,
    pub object_distance_zo: f64,
    pub background_distance_zb: f64,
    pub photographer_line: PhotographerLine,
}

impl SceneGeometry {
    /// Baseline `b = x_R - x_L`.
    pub fn baseline(&self) -> f64 {
        self.right.x - self.left.x
    }

    /// `Zo / Zb`, the fraction of the way from the cameras to the background
    /// at which the object sits.
    pub fn depth_ratio(&self) -> f64 {
        self.object_distance_zo / self.background_distance_zb
    }

    /// Interpolation weight `(x_S - x_L) / b`.
    pub fn synthesis_weight(&self) -> f64 {
        (self.synth_x - self.left.x) / self.baseline()
    }

    pub fn is_extrapolation(&self) -> bool {
        self.synth_x > self.right.x || self.synth_x < self.left.x
    }

    /// Reflects the scene about `x = 0`. Left and right cameras swap roles so
    /// that `left.x < right.x` still holds.
    pub fn mirrored(&self) -> Self {
        let line = self.photographer_line;
        Self {
            left: CameraPose::new(-self.right.x, self.right.z),
            right: CameraPose::new(-self.left.x, self.left.z),
            synth_x: -self.synth_x,
            photographer_line: PhotographerLine {
                p_x: -line.q_x,
                q_x: -line.p_x,
                ..line
            },
            ..*self
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.baseline() > 0.0) {
            out.push("baseline must be positive (left.x < right.x)".to_owned());
        }
        if !(self.object_distance_zo > 0.0) {
            out.push("object distance Zo must be positive".to_owned());
        }
        if !(self.object_distance_zo < self.background_distance_zb) {
            out.push("object must be strictly in front of background (Zo < Zb)".to_owned());
        }
        if !(self.object_length_l > 0.0) {
            out.push("object length l must be positive".to_owned());
        }
        for (name, cam) in [("left", self.left), ("right", self.right)] {
            if !(cam.z > 0.0) {
                out.push(format!("{name} camera distance z must be positive"));
            } else if (cam.z - self.background_distance_zb).abs()
                > 1e-9 * self.background_distance_zb.abs().max(1.0)
            {
                out.push(format!(
                    "{name} camera must stand on the focal plane (z = Zb = {}), got z = {}",
                    self.background_distance_zb, cam.z
                ));
            }
        }
        if !self.synth_x.is_finite() {
            out.push("synthesized viewpoint x must be finite".to_owned());
        }
        out.extend(self.photographer_line.violations());
        out
    }
}

/// Camera intrinsics relevant to the plan-view model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImagingParams {
    pub focal_length_f: f64,
    pub sensor_width: f64,
    pub pixel_pitch: f64,
}

impl ImagingParams {
    /// Full-frame sensor split into `width` pixels.
    pub fn full_frame(focal_length_f: f64, width: usize) -> Self {
        Self {
            focal_length_f,
            sensor_width: FULL_FRAME_SENSOR_WIDTH,
            pixel_pitch: FULL_FRAME_SENSOR_WIDTH / width as f64,
        }
    }

    /// Number of whole pixels across the sensor.
    pub fn width_px(&self) -> usize {
        (self.sensor_width / self.pixel_pitch).round() as usize
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.focal_length_f > 0.0) {
            out.push("focal length f must be positive".to_owned());
        }
        if !(self.sensor_width > 0.0) {
            out.push("sensor width must be positive".to_owned());
        }
        if !(self.pixel_pitch > 0.0) {
            out.push("pixel pitch must be positive".to_owned());
        }
        out
    }
}

/// The observer's guesses for quantities not measurable on the image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObserverGuess {
    pub guessed_l: f64,
    pub guessed_f: f64,
    pub guessed_zo: f64,
    pub guessed_zb: f64,
}

impl ObserverGuess {
    /// An observer who guesses every parameter correctly.
    pub fn exact(scene: &SceneGeometry, imaging: &ImagingParams) -> Self {
        Self {
            guessed_l: scene.object_length_l,
            guessed_f: imaging.focal_length_f,
            guessed_zo: scene.object_distance_zo,
            guessed_zb: scene.background_distance_zb,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [
            ("guessed_l", self.guessed_l),
            ("guessed_f", self.guessed_f),
            ("guessed_Zo", self.guessed_zo),
            ("guessed_Zb", self.guessed_zb),
        ] {
            if !(v > 0.0) {
                out.push(format!("{name} must be positive"));
            }
        }
        if !(self.guessed_zo < self.guessed_zb) {
            out.push("guessed_Zo must be smaller than guessed_Zb".to_owned());
        }
        out
    }
}

/// Which side of the object a hole hugs on the synthesized image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoleSide {
    LeftOfObject,
    RightOfObject,
    BothSides,
}

/// What the observer reads off a synthesized image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoleMeasurement {
    /// Hole size on the image plane; 0 means no hole.
    pub hole_h: f64,
    /// Object projection size on the image plane.
    pub projection_lhat: f64,
    pub side: HoleSide,
}

impl HoleMeasurement {
    pub fn new(hole_h: f64, projection_lhat: f64, side: HoleSide) -> Result<Self> {
        if !(hole_h >= 0.0) {
            return Err(invalid("hole_h", format!("must be non-negative, got {hole_h}")));
        }
        if !(projection_lhat > 0.0) {
            return Err(invalid(
                "projection_lhat",
                format!("must be positive, got {projection_lhat}"),
            ));
        }
        Ok(Self {
            hole_h,
            projection_lhat,
            side,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// Flat object parallel to the planes, the extrapolation model.
    Segment,
    /// Circular bump of radius `r` on a flat support of half-width `X_F`.
    CircleCap,
}

/// Shape of the object as seen in plan view.
///
/// The support spans `[-X_F, X_F]` on the object plane (depth `Zo`). For a
/// circle cap, the part `|x| <= r` bulges towards the cameras as a half circle
/// centered on `(0, Zo)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectProfile {
    pub kind: ProfileKind,
    pub half_support_xf: f64,
    pub radius_r: f64,
}

impl ObjectProfile {
    pub fn segment(length: f64) -> Self {
        Self {
            kind: ProfileKind::Segment,
            half_support_xf: length / 2.0,
            radius_r: 0.0,
        }
    }

    pub fn circle_cap(radius_r: f64, half_support_xf: f64) -> Self {
        Self {
            kind: ProfileKind::CircleCap,
            half_support_xf,
            radius_r,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.half_support_xf > 0.0) {
            out.push("half support X_F must be positive".to_owned());
        }
        if self.kind == ProfileKind::CircleCap
            && !(self.radius_r > 0.0 && self.radius_r <= self.half_support_xf)
        {
            out.push("circle cap needs 0 < r <= X_F".to_owned());
        }
        out
    }
}

/// Outcome of [`validate_scene`]: empty means the scene is usable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationResult {
    pub violations: Vec<String>,
}

impl ValidationResult {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidScene(self.violations))
        }
    }
}

/// Collects every violated setup constraint of the scene and imaging
/// parameters. Never fails; inspect the returned list.
pub fn validate_scene(scene: &SceneGeometry, imaging: &ImagingParams) -> ValidationResult {
    let mut violations = scene.violations();
    violations.extend(imaging.violations());
    ValidationResult { violations }
}

/// Pinhole projection of a length at `depth` onto the image plane.
pub fn project_length(world_len: f64, depth: f64, imaging: &ImagingParams) -> Result<f64> {
    if !(depth > 0.0) {
        return Err(Error::NonPositiveDepth(depth));
    }
    Ok(imaging.focal_length_f * world_len / depth)
}

/// Scene used throughout the examples: a speaker of shoulder width 0.5 m,
/// 5 m in front of the journalists and 2 m in front of the wall, recorded by
/// two of 20 journalists standing shoulder to shoulder.
///
/// `baseline` and `offset` place the cameras at `x_L = -baseline / 2 - offset / 2`
/// and the virtual view `offset` to the right of `R`.
pub fn press_conference(baseline: f64, offset: f64) -> (SceneGeometry, ImagingParams) {
    let zb = 7.0;
    let left_x = -(baseline + offset) / 2.0;
    let right_x = left_x + baseline;
    let scene = SceneGeometry {
        left: CameraPose::new(left_x, zb),
        right: CameraPose::new(right_x, zb),
        synth_x: right_x + offset,
        object_length_l: 0.5,
        object_distance_zo: 5.0,
        background_distance_zb: zb,
        photographer_line: PhotographerLine::packed(-5.0, 20, 0.5),
    };
    (scene, ImagingParams::full_frame(0.05, 2048))
}
