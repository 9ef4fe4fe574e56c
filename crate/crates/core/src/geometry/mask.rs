use serde::{Deserialize, Serialize};

use super::{GeometryError, Joint, Result, Skeleton2D};
use crate::raster::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyRegion {
    UpperBody,
    LowerBody,
}

/// Padding ratios: `k1` widens the horizontal span, `k2` the vertical span.
/// Each side grows by half the ratio times the span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Padding {
    pub k1: f64,
    pub k2: f64,
}

impl BodyRegion {
    pub fn padding(self) -> Padding {
        match self {
            BodyRegion::UpperBody => Padding { k1: 0.6, k2: 0.25 },
            BodyRegion::LowerBody => Padding { k1: 0.5, k2: 0.2 },
        }
    }

    /// Joints whose x extent defines the horizontal span.
    pub fn horizontal_joints(self) -> &'static [Joint] {
        use Joint::*;
        match self {
            BodyRegion::UpperBody => &[
                LeftShoulder,
                RightShoulder,
                LeftElbow,
                RightElbow,
                LeftWrist,
                RightWrist,
            ],
            BodyRegion::LowerBody => &[
                LeftHip, RightHip, LeftKnee, RightKnee, LeftAnkle, RightAnkle,
            ],
        }
    }

    /// Joints whose y extent defines the vertical span.
    pub fn vertical_joints(self) -> &'static [Joint] {
        use Joint::*;
        match self {
            BodyRegion::UpperBody => &[LeftShoulder, RightShoulder, LeftHip, RightHip],
            BodyRegion::LowerBody => &[LeftHip, RightHip, LeftAnkle, RightAnkle],
        }
    }

    pub fn required_joints(self) -> &'static [Joint] {
        use Joint::*;
        match self {
            BodyRegion::UpperBody => &[
                LeftShoulder,
                RightShoulder,
                LeftElbow,
                RightElbow,
                LeftWrist,
                RightWrist,
                LeftHip,
                RightHip,
            ],
            BodyRegion::LowerBody => &[
                LeftHip, RightHip, LeftKnee, RightKnee, LeftAnkle, RightAnkle,
            ],
        }
    }
}

/// Axis-aligned rectangle `[x0, x1) × [y0, y1)` inside a `image_width × image_height` frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectMask {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
    pub image_width: usize,
    pub image_height: usize,
}

impl RectMask {
    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0
    }

    pub fn rasterize(&self) -> BinaryMask {
        BinaryMask::from_fn(self.image_width, self.image_height, |x, y| {
            self.contains(x, y)
        })
    }
}

/// Keypoint-derived rectangular mask for `region` with the region's standard padding.
pub fn keypoints_to_mask(skeleton: &Skeleton2D, region: BodyRegion) -> Result<RectMask> {
    keypoints_to_mask_with(skeleton, region, region.padding())
}

/// Same as [`keypoints_to_mask`] with explicit padding ratios.
pub fn keypoints_to_mask_with(
    skeleton: &Skeleton2D,
    region: BodyRegion,
    padding: Padding,
) -> Result<RectMask> {
    for &j in region.required_joints() {
        skeleton.require(j)?;
    }
    let (min_x, max_x) = extent(skeleton, region.horizontal_joints(), |p| p.0);
    let (min_y, max_y) = extent(skeleton, region.vertical_joints(), |p| p.1);
    let span_x = max_x - min_x;
    let span_y = max_y - min_y;
    if span_x <= 0.0 {
        return Err(GeometryError::ZeroSpan("horizontal"));
    }
    if span_y <= 0.0 {
        return Err(GeometryError::ZeroSpan("vertical"));
    }
    let pad_x = padding.k1 * span_x / 2.0;
    let pad_y = padding.k2 * span_y / 2.0;
    let (w, h) = (skeleton.width(), skeleton.height());
    Ok(RectMask {
        x0: clamp_floor(min_x - pad_x, w),
        y0: clamp_floor(min_y - pad_y, h),
        x1: clamp_ceil(max_x + pad_x, w),
        y1: clamp_ceil(max_y + pad_y, h),
        image_width: w,
        image_height: h,
    })
}

fn extent(
    skeleton: &Skeleton2D,
    joints: &[Joint],
    coord: impl Fn((f64, f64)) -> f64,
) -> (f64, f64) {
    joints
        .iter()
        .filter_map(|&j| skeleton.get(j))
        .map(coord)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

fn clamp_floor(v: f64, limit: usize) -> usize {
    v.floor().clamp(0.0, limit as f64) as usize
}

fn clamp_ceil(v: f64, limit: usize) -> usize {
    v.ceil().clamp(0.0, limit as f64) as usize
}
