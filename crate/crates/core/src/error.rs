use thiserror::Error;

/// Errors raised by the analyses in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("depth must be positive, got {0}")]
    NonPositiveDepth(f64),

    #[error("object must be strictly in front of background (Zo = {zo}, Zb = {zb})")]
    DegenerateDepth { zo: f64, zb: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("scene failed validation: {}", .0.join("; "))]
    InvalidScene(Vec<String>),

    #[error("synthesized viewpoint x = {synth_x} lies inside [{left_x}, {right_x}]; extrapolation analysis does not apply")]
    NotExtrapolation { synth_x: f64, left_x: f64, right_x: f64 },

    #[error("synthesized viewpoint x = {synth_x} lies outside ({left_x}, {right_x}); interpolation analysis does not apply")]
    NotInterpolation { synth_x: f64, left_x: f64, right_x: f64 },

    #[error("hole {hole} is not smaller than the object projection {projection}")]
    InconsistentMeasurement { hole: f64, projection: f64 },

    #[error("baseline covers {cells} shoulder widths but the line only holds {n} photographers")]
    BaselineExceedsLine { cells: u64, n: u32 },

    #[error("no photographer pair is consistent with the constraint")]
    EmptySuspectSet,

    #[error("camera at ({x}, {z}) lies inside the object circle of radius {r}")]
    CameraInsideProfile { x: f64, z: f64, r: f64 },

    #[error("tangent is grazing (cos t = 0); camera position cannot be recovered")]
    GrazingTangent,

    #[error("camera at ({x}, {z}) is too low: its tangent point falls on the near side of the object")]
    ShallowCamera { x: f64, z: f64 },

    #[error("operation requires a circle_cap profile")]
    NotCircleProfile,

    #[error("anonymity undefined for {n} photographers (need at least 3)")]
    DegenerateAnonymity { n: u32 },

    #[error("suspect count {n_susp} outside [1, {total}]")]
    SuspectCountOutOfRange { n_susp: u64, total: u64 },

    #[error("probabilities must be non-negative and sum to 1")]
    InvalidDistribution,

    #[error("invalid scanline: {0}")]
    InvalidScanline(String),

    #[error("every pixel of the line is a hole")]
    AllHoles,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
