use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{GeometryError, Result};

/// Body joints consumed by the preprocessor; serialized in snake_case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Joint {
    LeftShoulder,
    RightShoulder,
    LeftElbow,
    RightElbow,
    LeftWrist,
    RightWrist,
    LeftHip,
    RightHip,
    LeftKnee,
    RightKnee,
    LeftAnkle,
    RightAnkle,
}

impl Joint {
    pub const ALL: [Joint; 12] = [
        Joint::LeftShoulder,
        Joint::RightShoulder,
        Joint::LeftElbow,
        Joint::RightElbow,
        Joint::LeftWrist,
        Joint::RightWrist,
        Joint::LeftHip,
        Joint::RightHip,
        Joint::LeftKnee,
        Joint::RightKnee,
        Joint::LeftAnkle,
        Joint::RightAnkle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Joint::LeftShoulder => "left_shoulder",
            Joint::RightShoulder => "right_shoulder",
            Joint::LeftElbow => "left_elbow",
            Joint::RightElbow => "right_elbow",
            Joint::LeftWrist => "left_wrist",
            Joint::RightWrist => "right_wrist",
            Joint::LeftHip => "left_hip",
            Joint::RightHip => "right_hip",
            Joint::LeftKnee => "left_knee",
            Joint::RightKnee => "right_knee",
            Joint::LeftAnkle => "left_ankle",
            Joint::RightAnkle => "right_ankle",
        }
    }
}

impl fmt::Display for Joint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Joint {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        Joint::ALL
            .into_iter()
            .find(|j| j.name() == s)
            .ok_or_else(|| GeometryError::InvalidSkeleton(format!("unknown joint `{s}`")))
    }
}

/// A keypoint in pixel units. Pixel `(i, j)` is centred on the integer point `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub x: f64,
    pub y: f64,
    pub visible: bool,
}

impl Keypoint {
    pub fn visible(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            visible: true,
        }
    }
}

/// Named 2-D keypoints of one person plus the frame they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton2D {
    width: usize,
    height: usize,
    joints: BTreeMap<Joint, Keypoint>,
}

impl Skeleton2D {
    /// Validates that the frame is non-empty and every visible joint lies inside it.
    pub fn new(
        width: usize,
        height: usize,
        joints: impl IntoIterator<Item = (Joint, Keypoint)>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(GeometryError::InvalidSkeleton(
                "image dimensions must be positive".into(),
            ));
        }
        let joints: BTreeMap<_, _> = joints.into_iter().collect();
        for (joint, kp) in &joints {
            if !kp.visible {
                continue;
            }
            let inside = kp.x.is_finite()
                && kp.y.is_finite()
                && kp.x >= 0.0
                && kp.y >= 0.0
                && kp.x < width as f64
                && kp.y < height as f64;
            if !inside {
                return Err(GeometryError::InvalidSkeleton(format!(
                    "{joint} at ({}, {}) lies outside the {width}x{height} image",
                    kp.x, kp.y
                )));
            }
        }
        Ok(Self {
            width,
            height,
            joints,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn joints(&self) -> &BTreeMap<Joint, Keypoint> {
        &self.joints
    }

    /// The joint's position if it is present and visible.
    pub fn get(&self, joint: Joint) -> Option<(f64, f64)> {
        self.joints
            .get(&joint)
            .filter(|kp| kp.visible)
            .map(|kp| (kp.x, kp.y))
    }

    pub(crate) fn require(&self, joint: Joint) -> Result<(f64, f64)> {
        self.get(joint).ok_or(GeometryError::MissingJoint(joint))
    }

    /// Mean y of whichever joints of the pair are visible.
    pub(crate) fn pair_mean_y(&self, a: Joint, b: Joint) -> Option<f64> {
        match (self.get(a), self.get(b)) {
            (Some(p), Some(q)) => Some(0.5 * (p.1 + q.1)),
            (Some(p), None) | (None, Some(p)) => Some(p.1),
            (None, None) => None,
        }
    }

    /// Shifts every joint by `(dx, dy)`; joints pushed out of frame become invisible.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        let joints = self
            .joints
            .iter()
            .map(|(&j, kp)| {
                let (x, y) = (kp.x + dx, kp.y + dy);
                let inside =
                    x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64;
                (
                    j,
                    Keypoint {
                        x,
                        y,
                        visible: kp.visible && inside,
                    },
                )
            })
            .collect();
        Self {
            width: self.width,
            height: self.height,
            joints,
        }
    }
}
