//! Boundary tracing, centroid and the centroid-distance signature.

use super::raster::{BinaryMask, Point};
use crate::error::{LeafError, Result};

/// Default number of arc-length samples in a [`RadialSignature`].
pub const DEFAULT_SIGNATURE_SAMPLES: usize = 128;

// Clockwise on screen (y grows downwards), starting west.
const DIRS: [(i32, i32); 8] = [(-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1)];

fn dir_index(dx: i32, dy: i32) -> usize {
    DIRS.iter().position(|&d| d == (dx, dy)).expect("offset is an 8-neighbour step")
}

/// A closed boundary: the last point joins back to the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    points: Vec<Point>,
}

impl Contour {
    /// A traced pixel boundary. Consecutive points (including last → first) must be
    /// distinct 8-neighbours.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let contour = Contour::from_polygon(points)?;
        let n = contour.points.len();
        for i in 0..n {
            let (a, b) = (contour.points[i], contour.points[(i + 1) % n]);
            if (a.x - b.x).abs() > 1 || (a.y - b.y).abs() > 1 {
                return Err(LeafError::DegenerateContour(format!("points {i} and {} are not 8-adjacent", (i + 1) % n)));
            }
        }
        Ok(contour)
    }

    /// Vertices of a closed polygon; edges may be longer than one pixel.
    pub fn from_polygon(points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        if n < 4 {
            return Err(LeafError::DegenerateContour(format!("{n} points, need at least 4")));
        }
        if (0..n).any(|i| points[i] == points[(i + 1) % n]) {
            return Err(LeafError::DegenerateContour("repeated consecutive point".into()));
        }
        Ok(Contour { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn translated(&self, dx: i32, dy: i32) -> Contour {
        Contour { points: self.points.iter().map(|p| Point::new(p.x + dx, p.y + dy)).collect() }
    }

    /// Twice the signed shoelace area; positive for counter-clockwise order in
    /// the (x, y) coordinate frame.
    pub fn signed_area2(&self) -> i64 {
        shoelace2(&self.points)
    }

    /// Closed path length: 1 per axial step, √2 per diagonal step, Euclidean
    /// otherwise. Summed by step class so the result is independent of the start point.
    pub fn perimeter(&self) -> f64 {
        let n = self.points.len();
        let (mut axial, mut diagonal) = (0u64, 0u64);
        let mut other = Vec::new();
        for i in 0..n {
            let (a, b) = (self.points[i], self.points[(i + 1) % n]);
            let (dx, dy) = ((a.x - b.x).abs(), (a.y - b.y).abs());
            match (dx, dy) {
                (1, 0) | (0, 1) => axial += 1,
                (1, 1) => diagonal += 1,
                _ => other.push(((dx as f64).powi(2) + (dy as f64).powi(2)).sqrt()),
            }
        }
        other.sort_by(f64::total_cmp);
        axial as f64 + diagonal as f64 * std::f64::consts::SQRT_2 + other.iter().sum::<f64>()
    }
}

pub(crate) fn shoelace2(points: &[Point]) -> i64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a.x as i64 * b.y as i64 - b.x as i64 * a.y as i64
        })
        .sum()
}

/// Moore-neighbour boundary trace of the foreground.
///
/// Starts at the topmost-then-leftmost foreground pixel, follows 8-connectivity and
/// returns the points in counter-clockwise order (positive shoelace area in the
/// pixel frame). Only the component containing the start pixel is traced.
pub fn extract_contour(mask: &BinaryMask) -> Result<Contour> {
    let (sx, sy) = mask.foreground().next().ok_or_else(|| LeafError::DegenerateContour("empty mask".into()))?;
    let start = Point::new(sx as i32, sy as i32);
    let is_fg = |p: Point| mask.get_signed(p.x as i64, p.y as i64);

    let step = |cur: Point, backtrack: usize| -> Option<(Point, usize)> {
        for k in 1..=8 {
            let d = (backtrack + k) % 8;
            let cand = Point::new(cur.x + DIRS[d].0, cur.y + DIRS[d].1);
            if is_fg(cand) {
                let prev = (backtrack + k - 1) % 8;
                let checked = Point::new(cur.x + DIRS[prev].0, cur.y + DIRS[prev].1);
                return Some((cand, dir_index(checked.x - cand.x, checked.y - cand.y)));
            }
        }
        None
    };

    let (first, mut backtrack) =
        step(start, 0).ok_or_else(|| LeafError::DegenerateContour("single-pixel foreground".into()))?;
    let mut points = vec![start, first];
    let mut cur = first;
    // Bounded by the number of directed pixel-to-pixel moves.
    let limit = 8 * mask.count() + 8;
    loop {
        let (next, bt) = step(cur, backtrack).expect("a traced pixel has a foreground neighbour");
        if cur == start && next == first {
            break;
        }
        points.push(next);
        cur = next;
        backtrack = bt;
        if points.len() > limit {
            return Err(LeafError::DegenerateContour("boundary trace did not close".into()));
        }
    }
    // the walk ends by re-entering the start pixel
    points.pop();

    if shoelace2(&points) < 0 {
        points[1..].reverse();
    }
    Contour::new(points)
}

/// Arithmetic mean of foreground pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centroid {
    pub x: f64,
    pub y: f64,
}

pub fn centroid(mask: &BinaryMask) -> Result<Centroid> {
    let (mut sx, mut sy, mut n) = (0.0f64, 0.0f64, 0usize);
    for (x, y) in mask.foreground() {
        sx += x as f64;
        sy += y as f64;
        n += 1;
    }
    if n == 0 {
        return Err(LeafError::EmptyRegion("centroid of an empty mask".into()));
    }
    Ok(Centroid { x: sx / n as f64, y: sy / n as f64 })
}

/// Distances from the centroid to `N` boundary points spaced evenly by arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSignature {
    d: Vec<f64>,
    centroid: Centroid,
    m1: f64,
}

impl RadialSignature {
    pub fn distances(&self) -> &[f64] {
        &self.d
    }

    pub fn centroid(&self) -> Centroid {
        self.centroid
    }

    /// Mean of the distances.
    pub fn mean(&self) -> f64 {
        self.m1
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

/// Resamples `contour` (closed) to `n` points equally spaced by arc length, starting
/// at the first contour point, and measures each point's distance to `centroid`.
pub fn radial_signature(contour: &Contour, centroid: Centroid, n: usize) -> Result<RadialSignature> {
    if n < 4 {
        return Err(LeafError::InvalidInput(format!("signature needs N >= 4, got {n}")));
    }
    let pts = contour.points();
    let m = pts.len();
    let seg_len: Vec<f64> = (0..m)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % m]);
            ((b.x - a.x) as f64).hypot((b.y - a.y) as f64)
        })
        .collect();
    let mut cum = Vec::with_capacity(m + 1);
    cum.push(0.0);
    for l in &seg_len {
        cum.push(cum.last().unwrap() + l);
    }
    let total = cum[m];
    if !(total > 0.0) {
        return Err(LeafError::DegenerateContour("zero-length contour".into()));
    }

    let mut d = Vec::with_capacity(n);
    let mut seg = 0usize;
    for k in 0..n {
        let s = k as f64 * total / n as f64;
        while seg + 1 < m && cum[seg + 1] <= s {
            seg += 1;
        }
        let (a, b) = (pts[seg], pts[(seg + 1) % m]);
        let t = (s - cum[seg]) / seg_len[seg];
        let rx = (a.x as f64 - centroid.x) + t * (b.x - a.x) as f64;
        let ry = (a.y as f64 - centroid.y) + t * (b.y - a.y) as f64;
        d.push(rx.hypot(ry));
    }
    let m1 = d.iter().sum::<f64>() / n as f64;
    Ok(RadialSignature { d, centroid, m1 })
}
