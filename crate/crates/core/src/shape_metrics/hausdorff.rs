use super::{Contour, MetricError, Point, Result};

#[inline]
fn dist_sq(a: Point, b: Point) -> u64 {
    let dx = (a.0 as i64 - b.0 as i64).unsigned_abs();
    let dy = (a.1 as i64 - b.1 as i64).unsigned_abs();
    dx * dx + dy * dy
}

/// `max_{p∈from} min_{q∈to} |p − q|²`, exact.
///
/// Early-break search: once some `q` is closer than the running maximum, `p`
/// cannot raise it. The scan for each `p` starts at the previous nearest index,
/// which for ordered contours is usually a near neighbour already.
fn directed_sq(from: &[Point], to: &[Point]) -> u64 {
    let n = to.len();
    let mut cmax = 0u64;
    let mut hint = 0usize;
    for &p in from {
        let mut cmin = u64::MAX;
        let mut arg = hint;
        for k in 0..n {
            let i = (hint + k) % n;
            let d = dist_sq(p, to[i]);
            if d < cmin {
                cmin = d;
                arg = i;
                if cmin <= cmax {
                    break;
                }
            }
        }
        hint = arg;
        cmax = cmax.max(cmin);
    }
    cmax
}

/// Squared symmetric Hausdorff distance over integer point sets, exact.
pub fn hausdorff_distance_sq(a: &[Point], b: &[Point]) -> Result<u64> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptyContour);
    }
    Ok(directed_sq(a, b).max(directed_sq(b, a)))
}

/// Symmetric Hausdorff distance with Euclidean ground distance.
pub fn hausdorff_distance(a: &Contour, b: &Contour) -> Result<f64> {
    hausdorff_distance_sq(&a.points, &b.points).map(|d| (d as f64).sqrt())
}

/// Hausdorff distance on every `stride`-th point of each contour. `stride <= 1`
/// is the exact distance.
pub fn hausdorff_distance_strided(a: &Contour, b: &Contour, stride: usize) -> Result<f64> {
    if stride <= 1 {
        return hausdorff_distance(a, b);
    }
    let sa: Vec<Point> = a.points.iter().copied().step_by(stride).collect();
    let sb: Vec<Point> = b.points.iter().copied().step_by(stride).collect();
    hausdorff_distance_sq(&sa, &sb).map(|d| (d as f64).sqrt())
}
