use serde::{Deserialize, Serialize};

use super::{MetricError, Result};
use crate::raster::{BinaryMask, LayoutClass, LayoutMap};

/// Integer pixel coordinate `(x, y)`.
pub type Point = (i32, i32);

/// Ordered boundary points. Traced contours are closed 8-connected chains;
/// arbitrary point sets are also accepted by the distance functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Contour {
    pub points: Vec<Point>,
}

impl Contour {
    pub fn new(points: Vec<Point>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when consecutive points (and last→first, for more than two points)
    /// are distinct 8-neighbours.
    pub fn is_closed_chain(&self) -> bool {
        let adjacent = |a: Point, b: Point| {
            let (dx, dy) = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
            dx <= 1 && dy <= 1 && (dx, dy) != (0, 0)
        };
        if self.points.is_empty() {
            return false;
        }
        let chain = self.points.windows(2).all(|w| adjacent(w[0], w[1]));
        chain
            && (self.points.len() <= 2
                || adjacent(self.points[self.points.len() - 1], self.points[0]))
    }
}

// Clockwise on screen (y grows downward), starting west.
const RING: [(i32, i32); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn ring_index(d: (i32, i32)) -> usize {
    RING.iter()
        .position(|&r| r == d)
        .expect("offset is an 8-neighbour")
}

/// Moore-neighbour trace of the outer boundary of the component containing the
/// topmost-then-leftmost set pixel. Clockwise; the start point appears once.
pub fn trace_outer_contour(mask: &BinaryMask) -> Result<Contour> {
    let (sx, sy) = mask.iter_set().next().ok_or(MetricError::EmptyMask)?;
    let start = (sx as i32, sy as i32);
    let fg = |p: Point| mask.get_signed(p.0 as i64, p.1 as i64);

    let mut points = vec![start];
    let mut cur = start;
    // west of the topmost-leftmost pixel is never foreground
    let mut back = 0usize;
    let mut first_step: Option<Point> = None;
    loop {
        let found = (1..=8).map(|k| (back + k) % 8).find(|&i| {
            let d = RING[i];
            fg((cur.0 + d.0, cur.1 + d.1))
        });
        let Some(idx) = found else { break };
        let next = (cur.0 + RING[idx].0, cur.1 + RING[idx].1);
        if cur == start {
            match first_step {
                Some(f) if f == next => break,
                None => first_step = Some(next),
                _ => {}
            }
        }
        let prev = RING[(idx + 7) % 8];
        let bp = (cur.0 + prev.0, cur.1 + prev.1);
        back = ring_index((bp.0 - next.0, bp.1 - next.1));
        points.push(next);
        cur = next;
    }
    if points.len() > 1 && points.last() == Some(&start) {
        points.pop();
    }
    Ok(Contour { points })
}

/// Largest 8-connected component; ties go to the component met first in raster order.
pub fn largest_component(mask: &BinaryMask) -> Option<BinaryMask> {
    let (w, h) = (mask.width(), mask.height());
    let mut label = vec![0u32; w * h];
    let mut best: Option<(u32, usize)> = None;
    let mut next_label = 0u32;
    let mut stack = Vec::new();
    for (x, y) in mask.iter_set() {
        if label[y * w + x] != 0 {
            continue;
        }
        next_label += 1;
        label[y * w + x] = next_label;
        stack.push((x, y));
        let mut size = 0usize;
        while let Some((cx, cy)) = stack.pop() {
            size += 1;
            for (dx, dy) in RING {
                let (nx, ny) = (cx as i64 + dx as i64, cy as i64 + dy as i64);
                if mask.get_signed(nx, ny) {
                    let i = ny as usize * w + nx as usize;
                    if label[i] == 0 {
                        label[i] = next_label;
                        stack.push((nx as usize, ny as usize));
                    }
                }
            }
        }
        if best.is_none_or(|(_, s)| size > s) {
            best = Some((next_label, size));
        }
    }
    let (keep, _) = best?;
    BinaryMask::from_vec(w, h, label.into_iter().map(|l| l == keep).collect())
}

/// Sets every unset pixel that is not 4-connected to the image border.
pub fn fill_holes(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let mut outside = vec![false; w * h];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let seed = |x: usize, y: usize, outside: &mut Vec<bool>, stack: &mut Vec<(usize, usize)>| {
        if !mask.get(x, y) && !outside[y * w + x] {
            outside[y * w + x] = true;
            stack.push((x, y));
        }
    };
    for x in 0..w {
        seed(x, 0, &mut outside, &mut stack);
        seed(x, h - 1, &mut outside, &mut stack);
    }
    for y in 0..h {
        seed(0, y, &mut outside, &mut stack);
        seed(w - 1, y, &mut outside, &mut stack);
    }
    while let Some((x, y)) = stack.pop() {
        let neighbours = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        for (nx, ny) in neighbours {
            if nx < w && ny < h {
                seed(nx, ny, &mut outside, &mut stack);
            }
        }
    }
    BinaryMask::from_vec(w, h, outside.into_iter().map(|o| !o).collect()).unwrap()
}

/// Largest garment component with interior holes filled.
pub fn garment_region(layout: &LayoutMap) -> Result<BinaryMask> {
    let garment = layout.class_mask(LayoutClass::Garment);
    let component = largest_component(&garment).ok_or(MetricError::EmptyClass)?;
    Ok(fill_holes(&component))
}

/// Outer boundary of the largest garment component.
pub fn extract_garment_contour(layout: &LayoutMap) -> Result<Contour> {
    let garment = layout.class_mask(LayoutClass::Garment);
    let component = largest_component(&garment).ok_or(MetricError::EmptyClass)?;
    trace_outer_contour(&component)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout_with(w: usize, h: usize, garment: impl Fn(usize, usize) -> bool) -> LayoutMap {
        let mut l = LayoutMap::new(w, h);
        for y in 0..h {
            for x in 0..w {
                if garment(x, y) {
                    l.set(x, y, LayoutClass::Garment);
                }
            }
        }
        l
    }

    #[test]
    fn square_border_has_twelve_points() {
        let l = layout_with(10, 10, |x, y| (3..7).contains(&x) && (3..7).contains(&y));
        let c = extract_garment_contour(&l).unwrap();
        let expected: Vec<Point> = vec![
            (3, 3),
            (4, 3),
            (5, 3),
            (6, 3),
            (6, 4),
            (6, 5),
            (6, 6),
            (5, 6),
            (4, 6),
            (3, 6),
            (3, 5),
            (3, 4),
        ];
        assert_eq!(c.points, expected);
        assert!(c.is_closed_chain());
    }

    #[test]
    fn empty_layout_is_an_error() {
        let l = LayoutMap::new(5, 5);
        assert_eq!(extract_garment_contour(&l), Err(MetricError::EmptyClass));
        assert_eq!(garment_region(&l), Err(MetricError::EmptyClass));
    }

    #[test]
    fn picks_largest_component() {
        // 5x10 block (50 px) and a 7 px bar
        let l = layout_with(30, 20, |x, y| {
            ((2..12).contains(&x) && (2..7).contains(&y)) || (y == 15 && (20..27).contains(&x))
        });
        let c = extract_garment_contour(&l).unwrap();
        assert!(c.points.iter().all(|&(x, y)| x < 12 && y < 7));
        assert_eq!(c.points[0], (2, 2));
    }

    #[test]
    fn single_pixel_and_line() {
        let l = layout_with(5, 5, |x, y| (x, y) == (2, 2));
        assert_eq!(extract_garment_contour(&l).unwrap().points, vec![(2, 2)]);
        let l = layout_with(6, 3, |x, y| y == 1 && (1..4).contains(&x));
        let c = extract_garment_contour(&l).unwrap();
        assert_eq!(c.points, vec![(1, 1), (2, 1), (3, 1), (2, 1)]);
    }

    #[test]
    fn concave_corner_pixel_is_skipped() {
        let l = layout_with(5, 5, |x, y| x < 3 && y < 3 && (x, y) != (2, 2));
        let c = extract_garment_contour(&l).unwrap();
        assert!(!c.points.contains(&(1, 1)));
        assert!(c.is_closed_chain());
    }

    #[test]
    fn holes_are_filled() {
        let ring = BinaryMask::from_fn(7, 7, |x, y| {
            (1..6).contains(&x) && (1..6).contains(&y) && !(x == 3 && y == 3)
        });
        let filled = fill_holes(&ring);
        assert!(filled.get(3, 3));
        assert!(!filled.get(0, 0));
        assert_eq!(filled.count(), 25);
    }
}
