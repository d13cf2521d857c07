//! Shared fixtures for the criterion benchmarks.

use veil_core::scene::{press_conference, ImagingParams, ObjectProfile, SceneGeometry};

/// The press-conference scene with a 1 mm hole beside the speaker.
pub fn hole_scene() -> (SceneGeometry, ImagingParams, ObjectProfile) {
    let (scene, imaging) = press_conference(1.4, 0.5);
    (scene, imaging, ObjectProfile::segment(scene.object_length_l))
}
