//! Occlusion on a rounded object seen by two cameras, for a virtual view
//! synthesized between them.
//!
//! Coordinates are local to the object: the circle of radius `r` is centered
//! on the origin of the object plane, `x` runs along the photographer line and
//! `z` points from the object plane towards the cameras, which sit at height
//! `Zo`. A camera left of the object cannot see the far right part of the
//! support and vice versa.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extrapolation::WidthRatio;
use crate::scene::{HoleSide, ImagingParams, ObjectProfile, ProfileKind, SceneGeometry};

/// Tangent from a camera to the object circle, on the side the camera cannot
/// see past.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentSolution {
    pub camera_x: f64,
    pub radius_r: f64,
    /// Polar angle of the tangent point.
    pub t: f64,
    pub sin_t: f64,
    pub tangent_x: f64,
    pub tangent_z: f64,
    /// Extent of the support hidden from the camera, `X_F - r |cos t|`.
    pub occlusion_h: f64,
    /// `occlusion_h` projected at depth `Zo`.
    pub hole_on_image: f64,
    /// Which end of the object is hidden.
    pub hidden_side: HoleSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationCase {
    OppositeSides,
    BothRight,
    BothLeft,
}

impl InterpolationCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::OppositeSides => "opposite_sides",
            Self::BothRight => "both_right",
            Self::BothLeft => "both_left",
        }
    }

    /// Case implied by where the holes sit on the synthesized image. Cameras
    /// right of the object hide its left end and vice versa.
    pub fn from_hole_side(side: HoleSide) -> Self {
        match side {
            HoleSide::BothSides => Self::OppositeSides,
            HoleSide::LeftOfObject => Self::BothRight,
            HoleSide::RightOfObject => Self::BothLeft,
        }
    }
}

/// A camera coordinate the observer either pins or only bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recovered {
    Exact(f64),
    /// Open interval `(lo, hi)`.
    Between(f64, f64),
}

impl Recovered {
    pub fn exact(self) -> Option<f64> {
        match self {
            Self::Exact(x) => Some(x),
            Self::Between(..) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationCaseReport {
    pub case: InterpolationCase,
    pub left_tangent: TangentSolution,
    pub right_tangent: TangentSolution,
    pub total_hole: f64,
    pub hole_side: HoleSide,
    pub x_l_recovered: Recovered,
    pub x_r_recovered: Recovered,
    pub n_susp: u64,
}

/// Finds the tangent point from a camera at `(camera_x, zo)` to the object
/// circle, on the side of the object facing away from the camera.
pub fn tangent_from_camera(
    camera_x: f64,
    zo: f64,
    profile: &ObjectProfile,
    imaging: &ImagingParams,
) -> Result<TangentSolution> {
    if profile.kind != ProfileKind::CircleCap {
        return Err(Error::NotCircleProfile);
    }
    if !(zo > 0.0) {
        return Err(Error::NonPositiveDepth(zo));
    }
    let r = profile.radius_r;
    let dist = camera_x.hypot(zo);
    if !(dist > r) {
        return Err(Error::CameraInsideProfile {
            x: camera_x,
            z: zo,
            r,
        });
    }
    // tangent points satisfy x cos t + z sin t = r, i.e. cos(t - phi) = r / dist
    let phi = zo.atan2(camera_x);
    let spread = (r / dist).acos();
    let (t, hidden_side, facing) = if camera_x <= 0.0 {
        (phi - spread, HoleSide::RightOfObject, 1.0)
    } else {
        (phi + spread, HoleSide::LeftOfObject, -1.0)
    };
    let (sin_t, cos_t) = t.sin_cos();
    if facing * cos_t < 0.0 {
        return Err(Error::ShallowCamera { x: camera_x, z: zo });
    }
    let occlusion_h = profile.half_support_xf - r * cos_t.abs();
    Ok(TangentSolution {
        camera_x,
        radius_r: r,
        t,
        sin_t,
        tangent_x: r * cos_t,
        tangent_z: r * sin_t,
        occlusion_h,
        hole_on_image: imaging.focal_length_f / zo * occlusion_h,
        hidden_side,
    })
}

/// Camera `x` on the line `z = zo` that is tangent to the circle at the given
/// point: `x = (r - zo sin t) / cos t`.
pub fn recover_camera_x(tangent: &TangentSolution, zo: f64) -> Result<f64> {
    let cos_t = tangent.tangent_x / tangent.radius_r;
    if cos_t.abs() < 1e-12 {
        return Err(Error::GrazingTangent);
    }
    Ok((tangent.radius_r - zo * tangent.sin_t) / cos_t)
}

/// Classifies an interpolated setup by which side of the object each camera
/// stands on, and counts the photographer positions left consistent with
/// what the holes reveal.
pub fn classify_and_count(
    scene: &SceneGeometry,
    profile: &ObjectProfile,
    imaging: &ImagingParams,
    l: f64,
) -> Result<InterpolationCaseReport> {
    let (x_l, x_r) = (scene.left.x, scene.right.x);
    if !(x_l < scene.synth_x && scene.synth_x < x_r) {
        return Err(Error::NotInterpolation {
            synth_x: scene.synth_x,
            left_x: x_l,
            right_x: x_r,
        });
    }
    let zo = scene.object_distance_zo;
    let left = tangent_from_camera(x_l, zo, profile, imaging)?;
    let right = tangent_from_camera(x_r, zo, profile, imaging)?;

    let case = if x_l > 0.0 {
        InterpolationCase::BothRight
    } else if x_r < 0.0 {
        InterpolationCase::BothLeft
    } else {
        InterpolationCase::OppositeSides
    };

    let report = match case {
        InterpolationCase::OppositeSides => InterpolationCaseReport {
            case,
            left_tangent: left,
            right_tangent: right,
            total_hole: left.hole_on_image + right.hole_on_image,
            hole_side: HoleSide::BothSides,
            x_l_recovered: Recovered::Exact(recover_camera_x(&left, zo)?),
            x_r_recovered: Recovered::Exact(recover_camera_x(&right, zo)?),
            n_susp: 1,
        },
        InterpolationCase::BothRight => {
            let x_r_hat = recover_camera_x(&right, zo)?;
            InterpolationCaseReport {
                case,
                left_tangent: left,
                right_tangent: right,
                total_hole: left.hole_on_image.max(right.hole_on_image),
                hole_side: HoleSide::LeftOfObject,
                x_l_recovered: Recovered::Between(0.0, x_r_hat),
                x_r_recovered: Recovered::Exact(x_r_hat),
                n_susp: WidthRatio::new(x_r_hat, l)?.ceil,
            }
        }
        InterpolationCase::BothLeft => {
            let x_l_hat = recover_camera_x(&left, zo)?;
            InterpolationCaseReport {
                case,
                left_tangent: left,
                right_tangent: right,
                total_hole: left.hole_on_image.max(right.hole_on_image),
                hole_side: HoleSide::RightOfObject,
                x_l_recovered: Recovered::Exact(x_l_hat),
                x_r_recovered: Recovered::Between(x_l_hat, 0.0),
                n_susp: WidthRatio::new(-x_l_hat, l)?.ceil,
            }
        }
    };
    Ok(report)
}
