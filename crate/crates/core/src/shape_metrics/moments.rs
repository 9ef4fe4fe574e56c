use serde::{Deserialize, Serialize};

use super::{MetricError, Result};
use crate::raster::BinaryMask;

/// Invariants with magnitude below this map to zero in the log domain.
pub const HU_ZERO_GUARD: f64 = 1e-30;

fn centroid(mask: &BinaryMask) -> Result<(f64, f64, f64)> {
    let (mut n, mut sx, mut sy) = (0.0f64, 0.0f64, 0.0f64);
    for (x, y) in mask.iter_set() {
        n += 1.0;
        sx += x as f64;
        sy += y as f64;
    }
    if n == 0.0 {
        return Err(MetricError::EmptyMask);
    }
    Ok((n, sx / n, sy / n))
}

/// `Σ (x − x̄)^p (y − ȳ)^q` over the set pixels.
pub fn central_moment(mask: &BinaryMask, p: u32, q: u32) -> Result<f64> {
    let (_, cx, cy) = centroid(mask)?;
    Ok(mask
        .iter_set()
        .map(|(x, y)| (x as f64 - cx).powi(p as i32) * (y as f64 - cy).powi(q as i32))
        .sum())
}

/// `μ_pq / μ_00^((p+q)/2 + 1)`, defined for `p + q ≥ 2`.
pub fn normalized_moment(mask: &BinaryMask, p: u32, q: u32) -> Result<f64> {
    if p + q < 2 {
        return Err(MetricError::OrderTooLow(p + q));
    }
    let mu = central_moment(mask, p, q)?;
    let (area, _, _) = centroid(mask)?;
    Ok(mu / area.powf((p + q) as f64 / 2.0 + 1.0))
}

/// The seven Hu moment invariants `[φ1 … φ7]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HuVector {
    pub phi: [f64; 7],
}

impl HuVector {
    /// Signed log-magnitude `sign(φ)·log10|φ|`, zero for vanishing entries.
    pub fn log_signature(&self) -> [f64; 7] {
        self.phi.map(|v| {
            if v.abs() < HU_ZERO_GUARD {
                0.0
            } else {
                v.signum() * v.abs().log10()
            }
        })
    }

    pub fn is_finite(&self) -> bool {
        self.phi.iter().all(|v| v.is_finite())
    }
}

/// Normalized second- and third-order moments, accumulated in one pass.
struct Eta {
    e20: f64,
    e02: f64,
    e11: f64,
    e30: f64,
    e03: f64,
    e21: f64,
    e12: f64,
}

impl Eta {
    fn of(mask: &BinaryMask) -> Result<Self> {
        let (area, cx, cy) = centroid(mask)?;
        let mut m = [0.0f64; 7];
        for (x, y) in mask.iter_set() {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            let (dx2, dy2) = (dx * dx, dy * dy);
            m[0] += dx2;
            m[1] += dy2;
            m[2] += dx * dy;
            m[3] += dx2 * dx;
            m[4] += dy2 * dy;
            m[5] += dx2 * dy;
            m[6] += dx * dy2;
        }
        let s2 = area * area;
        let s3 = area.powf(2.5);
        Ok(Self {
            e20: m[0] / s2,
            e02: m[1] / s2,
            e11: m[2] / s2,
            e30: m[3] / s3,
            e03: m[4] / s3,
            e21: m[5] / s3,
            e12: m[6] / s3,
        })
    }
}

pub fn hu_vector(mask: &BinaryMask) -> Result<HuVector> {
    let Eta {
        e20,
        e02,
        e11,
        e30,
        e03,
        e21,
        e12,
    } = Eta::of(mask)?;

    let a = e30 + e12;
    let b = e21 + e03;
    let c = e30 - 3.0 * e12;
    let d = 3.0 * e21 - e03;
    let (a2, b2) = (a * a, b * b);

    let phi1 = e20 + e02;
    let phi2 = (e20 - e02).powi(2) + 4.0 * e11 * e11;
    let phi3 = c * c + d * d;
    let phi4 = a2 + b2;
    let phi5 = c * a * (a2 - 3.0 * b2) + d * b * (3.0 * a2 - b2);
    let phi6 = (e20 - e02) * (a2 - b2) + 4.0 * e11 * a * b;
    let phi7 = d * a * (a2 - 3.0 * b2) - c * b * (3.0 * a2 - b2);

    Ok(HuVector {
        phi: [phi1, phi2, phi3, phi4, phi5, phi6, phi7],
    })
}

/// Sum of absolute differences of the signed log-magnitudes.
pub fn hu_distance(a: &HuVector, b: &HuVector) -> f64 {
    a.log_signature()
        .iter()
        .zip(b.log_signature())
        .map(|(x, y)| (x - y).abs())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn row(n: usize) -> BinaryMask {
        BinaryMask::from_fn(n, 1, |_, _| true)
    }

    #[test]
    fn small_moments() {
        let full = BinaryMask::from_fn(3, 3, |_, _| true);
        assert_eq!(central_moment(&full, 0, 0).unwrap(), 9.0);
        assert_eq!(central_moment(&full, 1, 0).unwrap(), 0.0);
        assert_eq!(central_moment(&row(5), 2, 0).unwrap(), 10.0);
        assert_abs_diff_eq!(
            normalized_moment(&row(5), 2, 0).unwrap(),
            0.4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn order_and_emptiness_errors() {
        assert_eq!(
            normalized_moment(&row(5), 1, 0),
            Err(MetricError::OrderTooLow(1))
        );
        let empty = BinaryMask::new(4, 4);
        assert_eq!(central_moment(&empty, 0, 0), Err(MetricError::EmptyMask));
        assert_eq!(hu_vector(&empty), Err(MetricError::EmptyMask));
    }

    #[test]
    fn phi1_is_sum_of_second_order_etas() {
        let m = BinaryMask::from_fn(20, 15, |x, y| x * 2 + y < 25 && y > 2);
        let hu = hu_vector(&m).unwrap();
        let direct = normalized_moment(&m, 2, 0).unwrap() + normalized_moment(&m, 0, 2).unwrap();
        assert_abs_diff_eq!(hu.phi[0], direct, epsilon = 1e-14);
    }

    #[test]
    fn log_map_contribution() {
        let a = HuVector {
            phi: [0.1, 1e-3, 1e-5, 1e-6, 1e-12, -1e-8, 0.0],
        };
        let mut b = a;
        b.phi[0] = 0.01;
        assert_abs_diff_eq!(hu_distance(&a, &b), 1.0, epsilon = 1e-12);
        assert_eq!(hu_distance(&a, &a), 0.0);
        assert_eq!(a.log_signature()[6], 0.0);
        assert_abs_diff_eq!(a.log_signature()[5], 8.0, epsilon = 1e-12);
    }
}
