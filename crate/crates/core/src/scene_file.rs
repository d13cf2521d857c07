//! JSON scene files.
//!
//! ```json
//! {
//!   "cameras": {"left_x": -0.95, "right_x": 0.45, "z": 7.0},
//!   "synth_x": 0.95,
//!   "object": {"l": 0.5, "Zo": 5.0, "kind": "segment"},
//!   "background": {"Zb": 7.0},
//!   "photographers": {"p_x": -5.0, "q_x": 5.0, "n": 20, "spacing": 0.5},
//!   "imaging": {"f": 0.05, "sensor_width": 0.036, "pixel_pitch": 1.7578125e-5}
//! }
//! ```
//!
//! All lengths are meters. `object.XF` defaults to `l / 2`; a circle cap
//! also needs `object.r`. The optional `observer_guess` (`l`, `f`, `Zo`,
//! `Zb`) defaults to the true values, and the optional `measurement`
//! (`h`, `lhat`, `side`) replaces the forecast hole with an observed one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::{
    CameraPose, HoleMeasurement, HoleSide, ImagingParams, ObjectProfile, ObserverGuess,
    PhotographerLine, ProfileKind, SceneGeometry,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CamerasJson {
    pub left_x: f64,
    pub right_x: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectJson {
    pub l: f64,
    #[serde(rename = "Zo")]
    pub zo: f64,
    #[serde(default = "segment_kind")]
    pub kind: ProfileKind,
    #[serde(rename = "XF", default, skip_serializing_if = "Option::is_none")]
    pub xf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

fn segment_kind() -> ProfileKind {
    ProfileKind::Segment
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundJson {
    #[serde(rename = "Zb")]
    pub zb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotographersJson {
    pub p_x: f64,
    pub q_x: f64,
    pub n: u32,
    pub spacing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImagingJson {
    pub f: f64,
    pub sensor_width: f64,
    pub pixel_pitch: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverGuessJson {
    pub l: f64,
    pub f: f64,
    #[serde(rename = "Zo")]
    pub zo: f64,
    #[serde(rename = "Zb")]
    pub zb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementJson {
    pub h: f64,
    pub lhat: f64,
    #[serde(default = "right_side")]
    pub side: HoleSide,
}

fn right_side() -> HoleSide {
    HoleSide::RightOfObject
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub cameras: CamerasJson,
    pub synth_x: f64,
    pub object: ObjectJson,
    pub background: BackgroundJson,
    pub photographers: PhotographersJson,
    pub imaging: ImagingJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observer_guess: Option<ObserverGuessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementJson>,
}

/// A scene file converted to domain types and validated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadedScene {
    pub scene: SceneGeometry,
    pub profile: ObjectProfile,
    pub imaging: ImagingParams,
    pub guess: ObserverGuess,
    pub measurement: Option<HoleMeasurement>,
}

impl LoadedScene {
    /// True when the object has no extent and casts no shadow.
    pub fn object_is_empty(&self) -> bool {
        self.profile.half_support_xf == 0.0
    }
}

impl SceneFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidScene(vec![format!("JSON: {e}")]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene files always serialize")
    }

    /// Builds the domain types and reports every violated constraint at once.
    pub fn load(&self) -> Result<LoadedScene> {
        let o = &self.object;
        let scene = SceneGeometry {
            left: CameraPose::new(self.cameras.left_x, self.cameras.z),
            right: CameraPose::new(self.cameras.right_x, self.cameras.z),
            synth_x: self.synth_x,
            object_length_l: o.l,
            object_distance_zo: o.zo,
            background_distance_zb: self.background.zb,
            photographer_line: PhotographerLine {
                p_x: self.photographers.p_x,
                q_x: self.photographers.q_x,
                count_n: self.photographers.n,
                spacing: self.photographers.spacing,
            },
        };
        let imaging = ImagingParams {
            focal_length_f: self.imaging.f,
            sensor_width: self.imaging.sensor_width,
            pixel_pitch: self.imaging.pixel_pitch,
        };
        let mut violations = scene.violations();
        violations.extend(imaging.violations());

        let profile = match o.kind {
            ProfileKind::Segment => {
                if o.r.is_some() {
                    violations.push("object.r only applies to kind \"circle_cap\"".to_owned());
                }
                ObjectProfile {
                    kind: ProfileKind::Segment,
                    half_support_xf: o.xf.unwrap_or(o.l / 2.0),
                    radius_r: 0.0,
                }
            }
            ProfileKind::CircleCap => {
                let r = o.r.unwrap_or_else(|| {
                    violations.push("object.r is required for kind \"circle_cap\"".to_owned());
                    f64::NAN
                });
                ObjectProfile::circle_cap(r, o.xf.unwrap_or(r))
            }
        };
        if profile.half_support_xf != 0.0 || o.kind == ProfileKind::CircleCap {
            violations.extend(profile.violations());
        } else if o.xf.is_some_and(|x| x < 0.0) {
            violations.push("object.XF must not be negative".to_owned());
        }

        let guess = match self.observer_guess {
            Some(g) => ObserverGuess {
                guessed_l: g.l,
                guessed_f: g.f,
                guessed_zo: g.zo,
                guessed_zb: g.zb,
            },
            None => ObserverGuess::exact(&scene, &imaging),
        };
        violations.extend(guess.violations());

        let measurement = match self.measurement {
            Some(m) => match HoleMeasurement::new(m.h, m.lhat, m.side) {
                Ok(m) => Some(m),
                Err(e) => {
                    violations.push(format!("measurement: {e}"));
                    None
                }
            },
            None => None,
        };

        if violations.is_empty() {
            Ok(LoadedScene {
                scene,
                profile,
                imaging,
                guess,
                measurement,
            })
        } else {
            Err(Error::InvalidScene(violations))
        }
    }

    /// Inverse of [`SceneFile::load`] for a segment or circle-cap scene.
    pub fn from_domain(
        scene: &SceneGeometry,
        profile: &ObjectProfile,
        imaging: &ImagingParams,
    ) -> Self {
        let line = scene.photographer_line;
        Self {
            cameras: CamerasJson {
                left_x: scene.left.x,
                right_x: scene.right.x,
                z: scene.left.z,
            },
            synth_x: scene.synth_x,
            object: ObjectJson {
                l: scene.object_length_l,
                zo: scene.object_distance_zo,
                kind: profile.kind,
                xf: Some(profile.half_support_xf),
                r: (profile.kind == ProfileKind::CircleCap).then_some(profile.radius_r),
            },
            background: BackgroundJson {
                zb: scene.background_distance_zb,
            },
            photographers: PhotographersJson {
                p_x: line.p_x,
                q_x: line.q_x,
                n: line.count_n,
                spacing: line.spacing,
            },
            imaging: ImagingJson {
                f: imaging.focal_length_f,
                sensor_width: imaging.sensor_width,
                pixel_pitch: imaging.pixel_pitch,
            },
            observer_guess: None,
            measurement: None,
        }
    }
}

/// Reads and validates a scene from JSON text.
pub fn load_scene(text: &str) -> Result<LoadedScene> {
    SceneFile::from_json(text)?.load()
}
