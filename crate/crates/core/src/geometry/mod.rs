//! Garment-agnostic preprocessing from 2-D body keypoints.
//!
//! Everything here is a function of a [`Skeleton2D`] alone: no garment pixels
//! reach the mask or dense-pose builders, so the outputs cannot carry the
//! contour of the garment originally worn.

mod densepose;
mod mask;
mod skeleton;

pub use densepose::{
    estimate_body_height, intersect_densepose, synthesize_densepose, synthesize_densepose_with,
    BodyPart, DensePoseMap, DensePoseStyle, JointCircle, Provenance, ARM_DIAMETER_RATIOS,
    CAP_SAGITTA_RATIO, LEG_DIAMETER_RATIOS, LEG_TO_HEIGHT, TORSO_TO_HEIGHT,
};
pub use mask::{keypoints_to_mask, keypoints_to_mask_with, BodyRegion, Padding, RectMask};
pub use skeleton::{Joint, Keypoint, Skeleton2D};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("required joint `{0}` is missing or not visible")]
    MissingJoint(Joint),
    #[error("degenerate pose: zero {0} span")]
    ZeroSpan(&'static str),
    #[error("not enough visible joints to estimate body height")]
    InsufficientJoints,
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid skeleton: {0}")]
    InvalidSkeleton(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
