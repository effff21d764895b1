//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use leafid::imaging::{BinaryMask, GrayImage, ImageRgb, Point};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Hull vertices by the all-pairs half-plane test: `(p, q)` is a hull edge when
/// every point lies strictly left of it or on the closed segment.
pub fn brute_force_hull(points: &[Point]) -> BTreeSet<Point> {
    let pts: Vec<Point> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let cross = |o: Point, a: Point, b: Point| {
        (a.x - o.x) as i64 * (b.y - o.y) as i64 - (a.y - o.y) as i64 * (b.x - o.x) as i64
    };
    let mut vertices = BTreeSet::new();
    for &p in &pts {
        for &q in &pts {
            if p == q {
                continue;
            }
            let edge = pts.iter().all(|&r| {
                let c = cross(p, q, r);
                c > 0
                    || (c == 0
                        && (p.x.min(q.x)..=p.x.max(q.x)).contains(&r.x)
                        && (p.y.min(q.y)..=p.y.max(q.y)).contains(&r.y))
            });
            if edge {
                vertices.insert(p);
                vertices.insert(q);
            }
        }
    }
    vertices
}

/// Two-dimensional equal-covariance Gaussian posteriors evaluated directly:
/// class means, pooled covariance over `n - c`, explicit 2×2 inverse and
/// determinant, densities in the linear domain.
pub fn direct_posterior_2d(train: &[[f64; 2]], labels: &[usize], x: [f64; 2]) -> Vec<f64> {
    let c = labels.iter().max().unwrap() + 1;
    let mut means = vec![[0.0; 2]; c];
    let mut counts = vec![0.0; c];
    for (p, &l) in train.iter().zip(labels) {
        means[l][0] += p[0];
        means[l][1] += p[1];
        counts[l] += 1.0;
    }
    for (m, n) in means.iter_mut().zip(&counts) {
        m[0] /= n;
        m[1] /= n;
    }
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (p, &l) in train.iter().zip(labels) {
        let (dx, dy) = (p[0] - means[l][0], p[1] - means[l][1]);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    let dof = (train.len() - c) as f64;
    let (sxx, syy, sxy) = (sxx / dof, syy / dof, sxy / dof);
    let det = sxx * syy - sxy * sxy;
    let (ixx, iyy, ixy) = (syy / det, sxx / det, -sxy / det);
    let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
    let dens: Vec<f64> = means
        .iter()
        .map(|m| {
            let (dx, dy) = (x[0] - m[0], x[1] - m[1]);
            let q = dx * dx * ixx + 2.0 * dx * dy * ixy + dy * dy * iyy;
            norm * (-0.5 * q).exp() / c as f64
        })
        .collect();
    let total: f64 = dens.iter().sum();
    dens.into_iter().map(|p| p / total).collect()
}

/// `per_class` samples of `classes` isotropic unit-variance Gaussian blobs in
/// `dim` dimensions whose means are `separation` apart along separate axes.
pub fn gaussian_blobs(
    rng: &mut impl Rng,
    classes: usize,
    per_class: usize,
    dim: usize,
    separation: f64,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut xs = Vec::new();
    let mut labels = Vec::new();
    for k in 0..classes {
        for _ in 0..per_class {
            let x = (0..dim)
                .map(|j| {
                    let noise: f64 = StandardNormal.sample(rng);
                    noise + if j == k % dim { separation * (k / dim + 1) as f64 } else { 0.0 }
                })
                .collect();
            xs.push(x);
            labels.push(k);
        }
    }
    (xs, labels)
}

/// An irregular silhouette: an ellipse with a round bump and a diamond spur.
pub fn blob_mask(w: usize, h: usize, cx: f64, cy: f64, s: f64) -> BinaryMask {
    BinaryMask::from_fn(w, h, |x, y| {
        let (dx, dy) = ((x as f64 - cx) / s, (y as f64 - cy) / s);
        (dx / 30.0).powi(2) + (dy / 17.0).powi(2) <= 1.0
            || (dx - 18.0).hypot(dy + 16.0) < 11.0
            || (dx + 20.0).abs() + (dy - 15.0).abs() < 9.0
    })
}

/// Rotates a mask by 90° (clockwise on screen).
pub fn rotate90(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    BinaryMask::from_fn(h, w, |x, y| mask.get(y, h - 1 - x))
}

/// Nearest-neighbour upscale by an integer factor.
pub fn upscale(mask: &BinaryMask, k: usize) -> BinaryMask {
    BinaryMask::from_fn(mask.width() * k, mask.height() * k, |x, y| mask.get(x / k, y / k))
}

pub fn random_gray(rng: &mut impl Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.gen())
}

/// A textured, veined leaf on a white background with its top-left corner of
/// the bounding box at `(ox, oy)`.
pub fn textured_leaf(w: usize, h: usize, ox: usize, oy: usize) -> ImageRgb {
    ImageRgb::from_fn(w, h, |x, y| {
        let (Some(lx), Some(ly)) = (x.checked_sub(ox), y.checked_sub(oy)) else {
            return [250, 250, 250];
        };
        let (dx, dy) = (lx as f64 - 30.0, ly as f64 - 20.0);
        if (dx / 30.0).powi(2) + (dy / 20.0).powi(2) > 1.0 {
            return [250, 250, 250];
        }
        let vein = dy.abs() < 1.0 || (dx - dy.abs()).rem_euclid(7.0) < 1.0;
        let t = ((lx * 31 + ly * 17) % 23) as u8;
        if vein {
            [90 + t, 170 + t, 80]
        } else {
            [40 + t, 120 + t / 2, 30 + t]
        }
    })
}
