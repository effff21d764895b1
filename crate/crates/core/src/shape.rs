//! Contour-based shape features: convex hull ratios, Shen roughness moments and the
//! auxiliary eccentricity / roundness / dispersion triple.

use std::cmp::Ordering;

use crate::error::{LeafError, Result};
use crate::imaging::{shoelace2, BinaryMask, Contour, Point, RadialSignature};

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.x - o.x) as i64 * (b.y - o.y) as i64 - (a.y - o.y) as i64 * (b.x - o.x) as i64
}

fn dist2(a: Point, b: Point) -> i64 {
    let (dx, dy) = ((a.x - b.x) as i64, (a.y - b.y) as i64);
    dx * dx + dy * dy
}

/// Graham scan.
///
/// Returns the strictly convex hull vertices in counter-clockwise order (positive
/// shoelace area), starting from the lowest-`y`, then lowest-`x` point. Collinear
/// boundary points are dropped. Exact integer arithmetic throughout.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    let pivot_idx = (0..pts.len()).min_by_key(|&i| (pts[i].y, pts[i].x)).ok_or(LeafError::DegenerateHull)?;
    let pivot = pts.swap_remove(pivot_idx);

    pts.sort_by(|&a, &b| match cross(pivot, a, b) {
        c if c > 0 => Ordering::Less,
        c if c < 0 => Ordering::Greater,
        _ => dist2(pivot, a).cmp(&dist2(pivot, b)),
    });

    let mut hull: Vec<Point> = vec![pivot];
    for p in pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    if hull.len() < 3 {
        return Err(LeafError::DegenerateHull);
    }
    Ok(hull)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullFeatures {
    /// Leaf area over hull area.
    pub solidity: f64,
    /// Hull perimeter over leaf perimeter.
    pub convexity: f64,
    pub hull_vertices: Vec<Point>,
}

fn hull_perimeter(hull: &[Point]) -> f64 {
    let n = hull.len();
    let mut edges: Vec<f64> = (0..n).map(|i| (dist2(hull[i], hull[(i + 1) % n]) as f64).sqrt()).collect();
    // summed in sorted order so the total does not depend on the starting vertex
    edges.sort_by(f64::total_cmp);
    edges.iter().sum()
}

/// Solidity and convexity. Leaf area is the foreground pixel count and leaf
/// perimeter the chain-code length of `contour`; the hull is taken over the
/// contour's pixel centres.
pub fn hull_features(mask: &BinaryMask, contour: &Contour) -> Result<HullFeatures> {
    let hull = convex_hull(contour.points())?;
    let hull_area = shoelace2(&hull) as f64 / 2.0;
    let area = mask.count() as f64;
    let perimeter = contour.perimeter();
    Ok(HullFeatures { solidity: area / hull_area, convexity: hull_perimeter(&hull) / perimeter, hull_vertices: hull })
}

/// Normalised central moments of the centroid-distance signature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShenFeatures {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    /// Roughness indicator `f3 - f1`.
    pub mf: f64,
}

pub fn shen_features(sig: &RadialSignature) -> Result<ShenFeatures> {
    shen_from_distances(sig.distances())
}

/// Shen moments of an arbitrary distance sequence.
///
/// The third moment keeps its sign (`sign(M3)·|M3|^(1/3)`). Values are sorted
/// before summation, so the result is independent of the sequence's start point.
pub fn shen_from_distances(d: &[f64]) -> Result<ShenFeatures> {
    if d.is_empty() {
        return Err(LeafError::InvalidInput("empty distance sequence".into()));
    }
    let mut sorted = d.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let m1 = sorted.iter().sum::<f64>() / n;
    if !(m1 > 0.0) {
        return Err(LeafError::InvalidInput("mean centroid distance is zero".into()));
    }
    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    for &v in &sorted {
        let e = v - m1;
        let e2 = e * e;
        s2 += e2;
        s3 += e2 * e;
        s4 += e2 * e2;
    }
    let (m2, m3, m4) = (s2 / n, s3 / n, s4 / n);
    let f1 = m2.sqrt() / m1;
    let f2 = m3.cbrt() / m1;
    let f3 = m4.sqrt().sqrt() / m1;
    Ok(ShenFeatures { f1, f2, f3, mf: f3 - f1 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxShapeFeatures {
    pub eccentricity: f64,
    pub roundness: f64,
    pub dispersion: f64,
}

/// Moment eccentricity, isoperimetric roundness and max/min radial distance.
pub fn aux_shape_features(mask: &BinaryMask, contour: &Contour, sig: &RadialSignature) -> Result<AuxShapeFeatures> {
    let n = mask.count();
    if n == 0 {
        return Err(LeafError::EmptyRegion("aux shape features of an empty mask".into()));
    }
    let (mut sx, mut sy) = (0.0, 0.0);
    for (x, y) in mask.foreground() {
        sx += x as f64;
        sy += y as f64;
    }
    let (cx, cy) = (sx / n as f64, sy / n as f64);
    let (mut cxx, mut cyy, mut cxy) = (0.0, 0.0, 0.0);
    for (x, y) in mask.foreground() {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        cxx += dx * dx;
        cyy += dy * dy;
        cxy += dx * dy;
    }
    let (cxx, cyy, cxy) = (cxx / n as f64, cyy / n as f64, cxy / n as f64);
    let half_trace = 0.5 * (cxx + cyy);
    let disc = (0.25 * (cxx - cyy).powi(2) + cxy * cxy).sqrt();
    let (l_max, l_min) = (half_trace + disc, (half_trace - disc).max(0.0));
    let eccentricity = if l_max > 0.0 { (1.0 - l_min / l_max).max(0.0).sqrt() } else { 0.0 };

    let perimeter = contour.perimeter();
    let roundness = 4.0 * std::f64::consts::PI * n as f64 / (perimeter * perimeter);

    let d = sig.distances();
    let d_max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let d_min = d.iter().copied().fold(f64::INFINITY, f64::min);
    if !(d_min > 0.0) {
        return Err(LeafError::InvalidInput("minimum centroid distance is zero".into()));
    }
    Ok(AuxShapeFeatures { eccentricity, roundness, dispersion: d_max / d_min })
}
