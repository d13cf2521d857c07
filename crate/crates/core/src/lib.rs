//! Camera-location leakage analysis for stereo view synthesis.
//!
//! Two cameras record a scene, a virtual view is synthesized from their
//! images, and an observer measures the holes left where neither camera saw
//! the background. This crate predicts those holes in closed form, inverts
//! them the way an observer would, counts the photographer pairs left
//! consistent with the measurement and turns that count into an anonymity
//! score. A ray-casting oracle and a scanline view synthesizer check the
//! closed forms independently.

pub mod anonymity;
pub mod error;
pub mod extrapolation;
pub mod format;
pub mod interpolation;
pub mod oracle;
pub mod scene;
pub mod scene_file;
pub mod synthesis;

pub use anonymity::{anonymity, AnonymityReport, PRESERVED_THRESHOLD};
pub use error::{Error, Result};
pub use extrapolation::{
    alpha, forecast_holes, invert_hole, suspect_pairs_hole, suspect_pairs_no_hole,
    AttackerInference, ExtrapolationForecast,
};
pub use interpolation::{
    classify_and_count, recover_camera_x, tangent_from_camera, InterpolationCase,
    InterpolationCaseReport, TangentSolution,
};
pub use oracle::{cast_occlusions, enumerate_suspect_pairs, OcclusionResult};
pub use scene_file::{load_scene, LoadedScene, SceneFile};
pub use scene::{
    project_length, validate_scene, CameraPose, HoleMeasurement, HoleSide, ImagingParams,
    ObjectProfile, ObserverGuess, PhotographerLine, ProfileKind, SceneGeometry,
    ValidationResult,
};
