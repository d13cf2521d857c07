//! Pinhole rendering of the scene onto one image row.

use rayon::prelude::*;

use super::{DisparityMap, Scanline};
use crate::error::{Error, Result};
use crate::scene::{CameraPose, ImagingParams, ObjectProfile, ProfileKind, SceneGeometry};

/// Texture knots are this many pixel footprints apart on each surface.
const KNOT_FOOTPRINTS: f64 = 3.0;

/// Extra disparity head room added by [`default_max_disparity`].
const DISPARITY_MARGIN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Surface {
    Background,
    Object,
}

#[derive(Debug, Clone, Copy)]
struct Hit {
    x: f64,
    depth: f64,
    surface: Surface,
}

/// The rendered world: a background plane and an optional object.
#[derive(Debug, Clone, Copy)]
struct World {
    zo: f64,
    zb: f64,
    plate_half: f64,
    disk_r: Option<f64>,
}

impl World {
    fn new(scene: &SceneGeometry, profile: &ObjectProfile, imaging: &ImagingParams) -> Result<Self> {
        let mut violations = scene.violations();
        violations.extend(imaging.violations());
        let has_object = profile.half_support_xf > 0.0;
        if has_object {
            violations.extend(profile.violations());
        }
        if !violations.is_empty() {
            return Err(Error::InvalidScene(violations));
        }
        Ok(Self {
            zo: scene.object_distance_zo,
            zb: scene.background_distance_zb,
            plate_half: profile.half_support_xf.max(0.0),
            disk_r: (has_object && profile.kind == ProfileKind::CircleCap)
                .then_some(profile.radius_r),
        })
    }

    fn nearest_depth(&self) -> f64 {
        match self.disk_r {
            Some(r) => self.zo - r,
            None if self.plate_half > 0.0 => self.zo,
            None => self.zb,
        }
    }

    /// First surface met by the ray `x = camera_x + slope * depth`.
    fn first_hit(&self, camera_x: f64, slope: f64) -> Hit {
        if let Some(r) = self.disk_r {
            let a = 1.0 + slope * slope;
            let b = 2.0 * (camera_x * slope - self.zo);
            let c = camera_x * camera_x + self.zo * self.zo - r * r;
            let disc = b * b - 4.0 * a * c;
            if disc > 0.0 {
                let depth = (-b - disc.sqrt()) / (2.0 * a);
                if depth > 0.0 && depth <= self.zo {
                    return Hit {
                        x: camera_x + slope * depth,
                        depth,
                        surface: Surface::Object,
                    };
                }
            }
        }
        let x = camera_x + slope * self.zo;
        if x.abs() < self.plate_half {
            return Hit {
                x,
                depth: self.zo,
                surface: Surface::Object,
            };
        }
        Hit {
            x: camera_x + slope * self.zb,
            depth: self.zb,
            surface: Surface::Background,
        }
    }

    /// True when nothing lies between the camera and the point.
    fn sees(&self, camera_x: f64, point: Hit) -> bool {
        let hit = self.first_hit(camera_x, (point.x - camera_x) / point.depth);
        hit.depth >= point.depth * (1.0 - 1e-9)
    }
}

/// Image-plane coordinate of the center of pixel `u`.
fn pixel_center(u: usize, width: usize, pitch: f64) -> f64 {
    (u as f64 + 0.5 - width as f64 / 2.0) * pitch
}

/// Continuous pixel coordinate of an image-plane position.
fn pixel_coordinate(xi: f64, width: usize, pitch: f64) -> f64 {
    xi / pitch + width as f64 / 2.0 - 0.5
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn knot_value(seed: u64, surface: Surface, k: i64) -> f64 {
    let salt = match surface {
        Surface::Background => 0x0b4c_6b9d_u64,
        Surface::Object => 0x5e1f_0a37_u64,
    };
    let h = splitmix64(splitmix64(seed ^ salt.rotate_left(32)) ^ k as u64);
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// Value noise anchored to the surface, so every camera sees the same
/// pattern at the same world point.
fn texture(seed: u64, surface: Surface, x: f64, knot_spacing: f64) -> f64 {
    let t = x / knot_spacing;
    let k = t.floor();
    let frac = t - k;
    let k = k as i64;
    let a = knot_value(seed, surface, k);
    let b = knot_value(seed, surface, k + 1);
    (a + frac * (b - a)).clamp(0.0, 1.0)
}

/// Renders the row seen by a camera at `camera.x` on the focal plane.
/// An object with zero half support renders as a bare background.
pub fn render_scanline(
    scene: &SceneGeometry,
    profile: &ObjectProfile,
    texture_seed: u64,
    camera: &CameraPose,
    imaging: &ImagingParams,
) -> Result<Scanline> {
    let world = World::new(scene, profile, imaging)?;
    let width = imaging.width_px();
    let (f, pitch) = (imaging.focal_length_f, imaging.pixel_pitch);
    let spacing = |depth: f64| KNOT_FOOTPRINTS * pitch * depth / f;
    let (bg_knots, obj_knots) = (spacing(world.zb), spacing(world.zo));
    let pixels = (0..width)
        .into_par_iter()
        .map(|u| {
            let hit = world.first_hit(camera.x, pixel_center(u, width, pitch) / f);
            let knots = match hit.surface {
                Surface::Background => bg_knots,
                Surface::Object => obj_knots,
            };
            texture(texture_seed, hit.surface, hit.x, knots)
        })
        .collect();
    Scanline::new(pixels, pitch)
}

/// Exact disparity on the left grid, valid where the right camera sees the
/// same surface point inside its field of view.
pub fn ground_truth_disparity(
    scene: &SceneGeometry,
    profile: &ObjectProfile,
    imaging: &ImagingParams,
) -> Result<DisparityMap> {
    let world = World::new(scene, profile, imaging)?;
    let width = imaging.width_px();
    let (f, pitch) = (imaging.focal_length_f, imaging.pixel_pitch);
    let (xl, xr) = (scene.left.x, scene.right.x);
    let (disparity, valid): (Vec<f64>, Vec<bool>) = (0..width)
        .into_par_iter()
        .map(|u| {
            let hit = world.first_hit(xl, pixel_center(u, width, pitch) / f);
            let u_r = pixel_coordinate(f * (hit.x - xr) / hit.depth, width, pitch);
            let in_view = u_r >= -0.5 && u_r < width as f64 - 0.5;
            (u_r - u as f64, in_view && world.sees(xr, hit))
        })
        .unzip();
    DisparityMap::new(disparity, valid)
}

/// Largest disparity magnitude the scene can produce plus a small margin,
/// capped below the image width.
pub fn default_max_disparity(
    scene: &SceneGeometry,
    profile: &ObjectProfile,
    imaging: &ImagingParams,
) -> Result<usize> {
    let world = World::new(scene, profile, imaging)?;
    let d = imaging.focal_length_f * scene.baseline() / (world.nearest_depth() * imaging.pixel_pitch);
    Ok((d.ceil() as usize + DISPARITY_MARGIN).min(imaging.width_px() - 1))
}
