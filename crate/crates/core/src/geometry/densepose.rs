use serde::{Deserialize, Serialize};

use super::{GeometryError, Joint, Result, Skeleton2D};
use crate::raster::{BinaryMask, LabelImage};

/// Body height as a multiple of the shoulder-to-hip height.
pub const TORSO_TO_HEIGHT: f64 = 3.2;
/// Body height as a multiple of the hip-to-ankle length.
pub const LEG_TO_HEIGHT: f64 = 2.3;
/// Joint circle diameters (shoulder, elbow, wrist) relative to body height.
pub const ARM_DIAMETER_RATIOS: [f64; 3] = [0.06, 0.048, 0.033];
/// Joint circle diameters (hip, knee, ankle) relative to body height.
pub const LEG_DIAMETER_RATIOS: [f64; 3] = [0.09, 0.055, 0.03];
/// Sagitta of the torso end caps relative to their chord.
pub const CAP_SAGITTA_RATIO: f64 = 0.15;

/// Dense-pose part labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum BodyPart {
    Background = 0,
    Torso = 1,
    LeftArm = 2,
    RightArm = 3,
    LeftLeg = 4,
    RightLeg = 5,
}

impl BodyPart {
    pub fn from_u8(v: u8) -> Option<Self> {
        use BodyPart::*;
        [Background, Torso, LeftArm, RightArm, LeftLeg, RightLeg]
            .get(v as usize)
            .copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Synthesized,
    Intersected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoseMap {
    labels: LabelImage,
    provenance: Provenance,
}

impl DensePoseMap {
    /// Fails with the first label outside `0..=5`.
    pub fn from_labels(
        labels: LabelImage,
        provenance: Provenance,
    ) -> std::result::Result<Self, u8> {
        match labels.as_slice().iter().find(|&&v| v > 5) {
            Some(&v) => Err(v),
            None => Ok(Self { labels, provenance }),
        }
    }

    pub fn labels(&self) -> &LabelImage {
        &self.labels
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn width(&self) -> usize {
        self.labels.width()
    }

    pub fn height(&self) -> usize {
        self.labels.height()
    }

    pub fn part(&self, x: usize, y: usize) -> BodyPart {
        BodyPart::from_u8(self.labels.get(x, y)).expect("labels are validated")
    }

    pub fn foreground(&self) -> BinaryMask {
        BinaryMask::from_vec(
            self.width(),
            self.height(),
            self.labels.as_slice().iter().map(|&v| v != 0).collect(),
        )
        .expect("dimensions are positive")
    }

    pub fn part_mask(&self, part: BodyPart) -> BinaryMask {
        self.labels.mask_of(part as u8)
    }
}

/// Rendering constants for [`synthesize_densepose_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensePoseStyle {
    pub arm_diameters: [f64; 3],
    pub leg_diameters: [f64; 3],
    pub cap_sagitta: f64,
}

impl Default for DensePoseStyle {
    fn default() -> Self {
        Self {
            arm_diameters: ARM_DIAMETER_RATIOS,
            leg_diameters: LEG_DIAMETER_RATIOS,
            cap_sagitta: CAP_SAGITTA_RATIO,
        }
    }
}

/// Standard-stature body height: 3.2× torso height when the torso is measurable,
/// otherwise 2.3× leg length.
pub fn estimate_body_height(skeleton: &Skeleton2D) -> Result<f64> {
    let shoulders = skeleton.pair_mean_y(Joint::LeftShoulder, Joint::RightShoulder);
    let hips = skeleton.pair_mean_y(Joint::LeftHip, Joint::RightHip);
    let ankles = skeleton.pair_mean_y(Joint::LeftAnkle, Joint::RightAnkle);

    if let (Some(s), Some(h)) = (shoulders, hips) {
        let torso = (h - s).abs();
        if torso > 0.0 {
            return Ok(TORSO_TO_HEIGHT * torso);
        }
    }
    if let (Some(h), Some(a)) = (hips, ankles) {
        let leg = (a - h).abs();
        if leg > 0.0 {
            return Ok(LEG_TO_HEIGHT * leg);
        }
    }
    Err(GeometryError::InsufficientJoints)
}

/// A joint circle of the synthetic limb model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointCircle {
    pub part: BodyPart,
    pub joint: Joint,
    pub center: (f64, f64),
    pub diameter: f64,
}

const LIMBS: [(BodyPart, [Joint; 3]); 4] = [
    (
        BodyPart::LeftArm,
        [Joint::LeftShoulder, Joint::LeftElbow, Joint::LeftWrist],
    ),
    (
        BodyPart::RightArm,
        [Joint::RightShoulder, Joint::RightElbow, Joint::RightWrist],
    ),
    (
        BodyPart::LeftLeg,
        [Joint::LeftHip, Joint::LeftKnee, Joint::LeftAnkle],
    ),
    (
        BodyPart::RightLeg,
        [Joint::RightHip, Joint::RightKnee, Joint::RightAnkle],
    ),
];

impl DensePoseStyle {
    /// Circles placed at every visible limb joint for a given body height.
    pub fn joint_circles(&self, skeleton: &Skeleton2D, body_height: f64) -> Vec<JointCircle> {
        let mut out = Vec::new();
        for (part, joints) in LIMBS {
            let ratios = match part {
                BodyPart::LeftArm | BodyPart::RightArm => self.arm_diameters,
                _ => self.leg_diameters,
            };
            for (joint, ratio) in joints.into_iter().zip(ratios) {
                if let Some(center) = skeleton.get(joint) {
                    out.push(JointCircle {
                        part,
                        joint,
                        center,
                        diameter: ratio * body_height,
                    });
                }
            }
        }
        out
    }
}

/// Synthesizes a standard-stature dense pose with the default proportions.
pub fn synthesize_densepose(skeleton: &Skeleton2D) -> Result<DensePoseMap> {
    synthesize_densepose_with(skeleton, &DensePoseStyle::default())
}

/// Torso: shoulder/hip quadrilateral plus two circular-segment caps.
/// Limbs: convex hulls of consecutive joint circles. Overlaps resolve
/// torso over arms over legs.
pub fn synthesize_densepose_with(
    skeleton: &Skeleton2D,
    style: &DensePoseStyle,
) -> Result<DensePoseMap> {
    let ls = skeleton.require(Joint::LeftShoulder)?;
    let rs = skeleton.require(Joint::RightShoulder)?;
    let lh = skeleton.require(Joint::LeftHip)?;
    let rh = skeleton.require(Joint::RightHip)?;
    let body_height = estimate_body_height(skeleton)?;

    let mut canvas = Canvas::new(skeleton.width(), skeleton.height());
    let circles = style.joint_circles(skeleton, body_height);

    // paint lowest priority first
    for part in [
        BodyPart::RightLeg,
        BodyPart::LeftLeg,
        BodyPart::RightArm,
        BodyPart::LeftArm,
    ] {
        let chain: Vec<_> = circles.iter().filter(|c| c.part == part).collect();
        let joints = LIMBS.iter().find(|(p, _)| *p == part).unwrap().1;
        for pair in joints.windows(2) {
            let a = chain.iter().find(|c| c.joint == pair[0]);
            let b = chain.iter().find(|c| c.joint == pair[1]);
            if let (Some(a), Some(b)) = (a, b) {
                let hull = CircleHull::new(a.center, a.diameter / 2.0, b.center, b.diameter / 2.0);
                canvas.paint(part, hull.bounds(), |p| hull.contains(p));
            }
        }
    }

    let quad = [ls, rs, rh, lh];
    canvas.paint(BodyPart::Torso, bounds_of(&quad, 0.0), |p| {
        point_in_polygon(p, &quad)
    });
    let shoulder_mid = midpoint(ls, rs);
    let hip_mid = midpoint(lh, rh);
    for (a, b, away_from) in [(ls, rs, hip_mid), (lh, rh, shoulder_mid)] {
        if let Some(cap) = CircularSegment::new(a, b, away_from, style.cap_sagitta) {
            canvas.paint(BodyPart::Torso, cap.bounds(), |p| cap.contains(p));
        }
    }

    Ok(DensePoseMap {
        labels: canvas.labels,
        provenance: Provenance::Synthesized,
    })
}

/// Keeps synthesized labels only where the predicted map is foreground.
pub fn intersect_densepose(synth: &DensePoseMap, predicted: &DensePoseMap) -> Result<DensePoseMap> {
    if synth.width() != predicted.width() || synth.height() != predicted.height() {
        return Err(GeometryError::DimensionMismatch(
            synth.width(),
            synth.height(),
            predicted.width(),
            predicted.height(),
        ));
    }
    let data = synth
        .labels
        .as_slice()
        .iter()
        .zip(predicted.labels.as_slice())
        .map(|(&s, &p)| if p != 0 { s } else { 0 })
        .collect();
    Ok(DensePoseMap {
        labels: LabelImage::from_vec(synth.width(), synth.height(), data).unwrap(),
        provenance: Provenance::Intersected,
    })
}

struct Canvas {
    labels: LabelImage,
}

type Bounds = (f64, f64, f64, f64);

impl Canvas {
    fn new(width: usize, height: usize) -> Self {
        Self {
            labels: LabelImage::new(width, height),
        }
    }

    fn paint(
        &mut self,
        part: BodyPart,
        (x0, y0, x1, y1): Bounds,
        inside: impl Fn((f64, f64)) -> bool,
    ) {
        let (w, h) = (self.labels.width(), self.labels.height());
        let Some((xa, xb)) = pixel_range(x0, x1, w) else {
            return;
        };
        let Some((ya, yb)) = pixel_range(y0, y1, h) else {
            return;
        };
        for y in ya..=yb {
            for x in xa..=xb {
                if inside((x as f64, y as f64)) {
                    self.labels.set(x, y, part as u8);
                }
            }
        }
    }
}

fn pixel_range(lo: f64, hi: f64, len: usize) -> Option<(usize, usize)> {
    let lo = lo.floor().max(0.0);
    let hi = hi.ceil().min(len as f64 - 1.0);
    (lo <= hi).then_some((lo as usize, hi as usize))
}

fn bounds_of(points: &[(f64, f64)], pad: f64) -> Bounds {
    points.iter().fold(
        (
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ),
        |(x0, y0, x1, y1), &(x, y)| {
            (
                x0.min(x - pad),
                y0.min(y - pad),
                x1.max(x + pad),
                y1.max(y + pad),
            )
        },
    )
}

fn midpoint(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1))
}

/// Even-odd rule; points on an edge may fall either way.
fn point_in_polygon(p: (f64, f64), poly: &[(f64, f64)]) -> bool {
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > p.1) != (yj > p.1) && p.0 < (xj - xi) * (p.1 - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside || on_polygon_edge(p, poly)
}

fn on_polygon_edge(p: (f64, f64), poly: &[(f64, f64)]) -> bool {
    (0..poly.len()).any(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        segment_distance_sq(p, a, b) < 1e-12
    })
}

fn segment_distance_sq(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len_sq).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    qx * qx + qy * qy
}

/// Convex hull of two circles (a tapered capsule).
struct CircleHull {
    c1: (f64, f64),
    r1: f64,
    c2: (f64, f64),
    r2: f64,
    axis: (f64, f64),
    len: f64,
    sin_a: f64,
    cos_a: f64,
}

impl CircleHull {
    fn new(c1: (f64, f64), r1: f64, c2: (f64, f64), r2: f64) -> Self {
        let (dx, dy) = (c2.0 - c1.0, c2.1 - c1.1);
        let len = dx.hypot(dy);
        let axis = if len > 0.0 {
            (dx / len, dy / len)
        } else {
            (1.0, 0.0)
        };
        let sin_a = if len > 0.0 {
            ((r1 - r2) / len).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        Self {
            c1,
            r1,
            c2,
            r2,
            axis,
            len,
            sin_a,
            cos_a: (1.0 - sin_a * sin_a).sqrt(),
        }
    }

    fn bounds(&self) -> Bounds {
        let r = self.r1.max(self.r2);
        bounds_of(&[self.c1, self.c2], r)
    }

    fn contains(&self, p: (f64, f64)) -> bool {
        let in_circle = |c: (f64, f64), r: f64| {
            let (dx, dy) = (p.0 - c.0, p.1 - c.1);
            dx * dx + dy * dy <= r * r
        };
        if in_circle(self.c1, self.r1) || in_circle(self.c2, self.r2) {
            return true;
        }
        // one circle swallows the other
        if self.len <= (self.r1 - self.r2).abs() {
            return false;
        }
        // local frame: u along the axis from c1, v = |perpendicular offset|
        let (dx, dy) = (p.0 - self.c1.0, p.1 - self.c1.1);
        let u = dx * self.axis.0 + dy * self.axis.1;
        let v = (dx * self.axis.1 - dy * self.axis.0).abs();
        // tangent line has normal (sin_a, cos_a) and offset r1; its direction is (cos_a, -sin_a)
        let along = u * self.cos_a - v * self.sin_a;
        let normal = u * self.sin_a + v * self.cos_a;
        along >= 0.0 && along <= self.len * self.cos_a && normal <= self.r1
    }
}

/// Circular segment on chord `a`–`b`, bulging away from a reference point.
struct CircularSegment {
    center: (f64, f64),
    radius: f64,
    mid: (f64, f64),
    outward: (f64, f64),
}

impl CircularSegment {
    fn new(
        a: (f64, f64),
        b: (f64, f64),
        away_from: (f64, f64),
        sagitta_ratio: f64,
    ) -> Option<Self> {
        let chord = (b.0 - a.0).hypot(b.1 - a.1);
        if chord <= 0.0 || sagitta_ratio <= 0.0 {
            return None;
        }
        let sagitta = sagitta_ratio * chord;
        let radius = chord * chord / (8.0 * sagitta) + sagitta / 2.0;
        let mid = midpoint(a, b);
        let mut outward = (-(b.1 - a.1) / chord, (b.0 - a.0) / chord);
        if outward.0 * (away_from.0 - mid.0) + outward.1 * (away_from.1 - mid.1) > 0.0 {
            outward = (-outward.0, -outward.1);
        }
        let back = radius - sagitta;
        Some(Self {
            center: (mid.0 - outward.0 * back, mid.1 - outward.1 * back),
            radius,
            mid,
            outward,
        })
    }

    fn bounds(&self) -> Bounds {
        bounds_of(&[self.center], self.radius)
    }

    fn contains(&self, p: (f64, f64)) -> bool {
        let (dx, dy) = (p.0 - self.center.0, p.1 - self.center.1);
        dx * dx + dy * dy <= self.radius * self.radius
            && (p.0 - self.mid.0) * self.outward.0 + (p.1 - self.mid.1) * self.outward.1 >= 0.0
    }
}
