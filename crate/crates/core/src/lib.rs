//! Preprocessing, shape-metric and conditioning kernels for fit-aware virtual try-on.
//!
//! * [`geometry`]: keypoint masks and synthetic dense poses that carry no garment shape.
//! * [`shape_metrics`]: garment contours, Hu moment invariants, Hausdorff distance.
//! * [`cond_kernel`]: array-level conditioning math (input composition, FiLM,
//!   multi-scale alignment, zero-initialized projection, injection loss).
//! * [`harness`]: synthetic silhouette families and fit-confusion reports.
//! * [`formats`]: keypoint JSON, label PNGs, manifests and the tensor container.

pub mod cond_kernel;
pub mod fit;
pub mod formats;
pub mod geometry;
pub mod harness;
pub mod raster;
pub mod shape_metrics;

pub use fit::{FitClass, GarmentKind};
pub use raster::{BinaryMask, LabelImage, LayoutClass, LayoutMap};
