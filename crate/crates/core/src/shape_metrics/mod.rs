//! Contour-based fit consistency metrics.
//!
//! Moments and Hu invariants are evaluated on the filled garment region;
//! the Hausdorff distance on the traced outer contour.

mod contour;
mod hausdorff;
mod moments;

pub use contour::{
    extract_garment_contour, fill_holes, garment_region, largest_component, trace_outer_contour,
    Contour, Point,
};
pub use hausdorff::{hausdorff_distance, hausdorff_distance_sq, hausdorff_distance_strided};
pub use moments::{
    central_moment, hu_distance, hu_vector, normalized_moment, HuVector, HU_ZERO_GUARD,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("layout has no garment pixels")]
    EmptyClass,
    #[error("mask has no set pixels")]
    EmptyMask,
    #[error("moment order p+q = {0} is below 2")]
    OrderTooLow(u32),
    #[error("contour has no points")]
    EmptyContour,
}

pub type Result<T> = std::result::Result<T, MetricError>;
