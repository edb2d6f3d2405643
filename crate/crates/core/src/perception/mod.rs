//! Simulated fiducial vision and point-feature video stabilization.
//!
//! Tag detection works at the corner level: tags are projected through an
//! ideal pinhole, gated on range, visibility and facing, perturbed with pixel
//! noise and then fed to a planar pose solver. Stabilization runs on
//! synthetic intensity frames.

mod camera;
mod features;
mod flow;
mod frame;
mod pose;
mod stabilize;
pub mod synthetic;

use serde::{Deserialize, Serialize};

pub use camera::{
    camera_pose, detect_tags, project_tag, CameraModel, TagObservation, TagSpec,
    DEFAULT_TAG_SIDE, MAX_DETECTION_RANGE, MIN_DETECTION_RANGE,
};
pub use features::{good_features, intensity_error, structure_tensor, StructureTensor, Weighting};
pub use flow::{lk_flow, lk_flow_with, Flow, LkParams};
pub use frame::Frame;
pub use pose::estimate_tag_pose;
pub use stabilize::{
    fit_similarity, smooth_transforms, stabilize, stabilize_with, SimilarityTransform2D,
    Stabilization, StabilizerParams,
};

/// A point in pixel coordinates (`x` right, `y` down).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}
