use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HarnessError, Result};
use crate::fit::FitClass;
use crate::raster::{LayoutClass, LayoutMap};

/// Minimum `(height, width)` of a synthetic canvas.
pub const MIN_CANVAS: (usize, usize) = (64, 48);

/// Boundary jitter amplitude in normalized canvas units.
const JITTER: f64 = 0.006;

type Pt = (f64, f64);

/// Maps normalized `(u, v)` coordinates onto the pixel grid.
struct Painter {
    layout: LayoutMap,
    w: f64,
    h: f64,
}

impl Painter {
    fn new(width: usize, height: usize) -> Self {
        Self {
            layout: LayoutMap::new(width, height),
            w: width as f64,
            h: height as f64,
        }
    }

    fn px(&self, (u, v): Pt) -> Pt {
        (u * self.w, v * self.h)
    }

    fn fill(&mut self, class: LayoutClass, bounds: (Pt, Pt), inside: impl Fn(Pt) -> bool) {
        let (lo, hi) = bounds;
        let x0 = lo.0.floor().max(0.0) as usize;
        let y0 = lo.1.floor().max(0.0) as usize;
        let x1 = (hi.0.ceil() as usize).min(self.layout.width() - 1);
        let y1 = (hi.1.ceil() as usize).min(self.layout.height() - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                if inside((x as f64, y as f64)) {
                    self.layout.set(x, y, class);
                }
            }
        }
    }

    fn polygon(&mut self, class: LayoutClass, pts: &[Pt]) {
        let pts: Vec<Pt> = pts.iter().map(|&p| self.px(p)).collect();
        let bounds = pts.iter().fold(
            (
                (f64::INFINITY, f64::INFINITY),
                (f64::NEG_INFINITY, f64::NEG_INFINITY),
            ),
            |(lo, hi), &(x, y)| ((lo.0.min(x), lo.1.min(y)), (hi.0.max(x), hi.1.max(y))),
        );
        self.fill(class, bounds, |p| in_polygon(p, &pts));
    }

    /// Capsule with radius given as a fraction of the canvas width.
    fn capsule(&mut self, class: LayoutClass, a: Pt, b: Pt, radius: f64) {
        let (a, b) = (self.px(a), self.px(b));
        let r = radius * self.w;
        let bounds = (
            (a.0.min(b.0) - r, a.1.min(b.1) - r),
            (a.0.max(b.0) + r, a.1.max(b.1) + r),
        );
        self.fill(class, bounds, |p| segment_dist_sq(p, a, b) <= r * r);
    }
}

fn in_polygon(p: Pt, poly: &[Pt]) -> bool {
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
    inside
}

fn segment_dist_sq(p: Pt, a: Pt, b: Pt) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = dx * dx + dy * dy;
    let t = if len == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len).clamp(0.0, 1.0)
    };
    let (ex, ey) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    ex * ex + ey * ey
}

// Fixed body with one raised arm. The asymmetry keeps the third-order Hu
// invariants well away from zero.
const SHOULDER_L: Pt = (0.34, 0.20);
const SHOULDER_R: Pt = (0.66, 0.20);
const ELBOW_L: Pt = (0.17, 0.25);
const ELBOW_R: Pt = (0.70, 0.37);
const WRIST_L: Pt = (0.05, 0.16);
const WRIST_R: Pt = (0.72, 0.52);
const HIP_L: Pt = (0.39, 0.52);
const HIP_R: Pt = (0.61, 0.52);
const ANKLE_L: Pt = (0.38, 0.95);
const ANKLE_R: Pt = (0.63, 0.95);
const ARM_RADIUS: f64 = 0.035;
const LEG_RADIUS: f64 = 0.05;

fn paint_body(p: &mut Painter) {
    let body = LayoutClass::Body;
    p.capsule(body, (0.5, 0.08), (0.5, 0.10), 0.07);
    p.polygon(
        body,
        &[(0.46, 0.12), (0.54, 0.12), (0.54, 0.21), (0.46, 0.21)],
    );
    p.polygon(body, &[SHOULDER_L, SHOULDER_R, HIP_R, HIP_L]);
    for (s, e, w) in [
        (SHOULDER_L, ELBOW_L, WRIST_L),
        (SHOULDER_R, ELBOW_R, WRIST_R),
    ] {
        p.capsule(body, s, e, ARM_RADIUS);
        p.capsule(body, e, w, ARM_RADIUS * 0.85);
    }
    for (hip, ankle) in [((0.44, 0.52), ANKLE_L), ((0.56, 0.52), ANKLE_R)] {
        p.capsule(body, hip, ankle, LEG_RADIUS);
    }
}

fn draw_factor(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn jitter(rng: &mut impl Rng, (u, v): Pt) -> Pt {
    (
        u + JITTER * (2.0 * rng.random::<f64>() - 1.0),
        v + JITTER * (2.0 * rng.random::<f64>() - 1.0),
    )
}

fn top_width_range(fit: FitClass) -> (f64, f64) {
    match fit {
        FitClass::Slim => (0.9, 1.0),
        FitClass::Regular => (1.05, 1.15),
        FitClass::Loose => (1.25, 1.4),
        _ => unreachable!("not a top fit"),
    }
}

fn paint_top(p: &mut Painter, fit: FitClass, rng: &mut impl Rng) {
    let f = draw_factor(rng, top_width_range(fit));
    let sx = |x: f64| 0.5 + (x - 0.5) * f;
    let torso = [
        (0.44, 0.185),
        (0.56, 0.185),
        (sx(0.67), 0.19),
        (sx(0.665), 0.30),
        (sx(0.64), 0.58),
        (sx(0.36), 0.58),
        (sx(0.335), 0.30),
        (sx(0.33), 0.19),
    ];
    let torso: Vec<Pt> = torso.iter().map(|&q| jitter(rng, q)).collect();
    p.polygon(LayoutClass::Garment, &torso);

    // short sleeves follow the upper arm; their width scales with the fit
    for (shoulder, elbow) in [(SHOULDER_L, ELBOW_L), (SHOULDER_R, ELBOW_R)] {
        let (dx, dy) = (elbow.0 - shoulder.0, elbow.1 - shoulder.1);
        let len = (dx * dx + dy * dy).sqrt();
        let (ax, ay) = (dx / len, dy / len);
        let (nx, ny) = (-ay, ax);
        let reach = 0.6 * len;
        let half_w = 0.05 * f;
        let start = (shoulder.0 - ax * 0.01, shoulder.1 - ay * 0.01);
        let end = (shoulder.0 + ax * reach, shoulder.1 + ay * reach);
        let quad = [
            (start.0 + nx * half_w * 1.15, start.1 + ny * half_w * 1.15),
            (end.0 + nx * half_w, end.1 + ny * half_w),
            (end.0 - nx * half_w, end.1 - ny * half_w),
            (start.0 - nx * half_w * 1.15, start.1 - ny * half_w * 1.15),
        ];
        let quad: Vec<Pt> = quad.iter().map(|&q| jitter(rng, q)).collect();
        p.polygon(LayoutClass::Garment, &quad);
    }
}

fn paint_bottom(p: &mut Painter, fit: FitClass, rng: &mut impl Rng) {
    let taper = match fit {
        FitClass::Tapered => draw_factor(rng, (0.5, 0.65)),
        FitClass::Straight => 1.0,
        _ => unreachable!("not a bottom fit"),
    };
    let waist: Vec<Pt> = [(0.37, 0.48), (0.63, 0.48), (0.64, 0.60), (0.36, 0.60)]
        .iter()
        .map(|&q| jitter(rng, q))
        .collect();
    p.polygon(LayoutClass::Garment, &waist);
    let hip_half = 0.075;
    let ankle_half = hip_half * taper;
    for (top, bottom) in [((0.435, 0.56), (0.38, 0.93)), ((0.565, 0.56), (0.63, 0.93))] {
        let leg = [
            (top.0 - hip_half, top.1),
            (top.0 + hip_half, top.1),
            (bottom.0 + ankle_half, bottom.1),
            (bottom.0 - ankle_half, bottom.1),
        ];
        let leg: Vec<Pt> = leg.iter().map(|&q| jitter(rng, q)).collect();
        p.polygon(LayoutClass::Garment, &leg);
    }
}

/// Deterministic three-class layout of a fixed body wearing a garment whose
/// width (tops) or leg taper (bottoms) is drawn from the fit's range.
/// `canvas` is `(height, width)`.
pub fn synth_silhouette(fit: FitClass, seed: u64, canvas: (usize, usize)) -> Result<LayoutMap> {
    let (height, width) = canvas;
    if height < MIN_CANVAS.0 || width < MIN_CANVAS.1 {
        return Err(HarnessError::CanvasTooSmall(height, width));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut painter = Painter::new(width, height);
    paint_body(&mut painter);
    match fit.kind() {
        crate::GarmentKind::Top => paint_top(&mut painter, fit, &mut rng),
        crate::GarmentKind::Bottom => paint_bottom(&mut painter, fit, &mut rng),
    }
    Ok(painter.layout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_width(l: &LayoutMap, y: usize) -> usize {
        (0..l.width())
            .filter(|&x| l.get(x, y) == LayoutClass::Garment)
            .count()
    }

    #[test]
    fn deterministic() {
        let a = synth_silhouette(FitClass::Regular, 7, (128, 96)).unwrap();
        let b = synth_silhouette(FitClass::Regular, 7, (128, 96)).unwrap();
        assert_eq!(a, b);
        let c = synth_silhouette(FitClass::Regular, 8, (128, 96)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn loose_covers_more_than_slim() {
        for seed in 0..20 {
            let slim = synth_silhouette(FitClass::Slim, seed, (128, 96)).unwrap();
            let loose = synth_silhouette(FitClass::Loose, seed, (128, 96)).unwrap();
            assert!(loose.count(LayoutClass::Garment) > slim.count(LayoutClass::Garment));
        }
    }

    #[test]
    fn tapered_narrows_at_the_ankle() {
        for seed in 0..20 {
            let l = synth_silhouette(FitClass::Tapered, seed, (256, 192)).unwrap();
            let hip = row_width(&l, (0.58 * 256.0) as usize);
            let ankle = row_width(&l, (0.92 * 256.0) as usize);
            assert!(ankle < hip, "seed {seed}: ankle {ankle} hip {hip}");
        }
    }

    #[test]
    fn minimum_canvas() {
        assert!(synth_silhouette(FitClass::Slim, 0, (64, 48)).is_ok());
        assert_eq!(
            synth_silhouette(FitClass::Slim, 0, (63, 48)),
            Err(HarnessError::CanvasTooSmall(63, 48))
        );
        assert!(synth_silhouette(FitClass::Slim, 0, (64, 47)).is_err());
    }
}
