//! Polar Fourier transform shape descriptors.
//!
//! The silhouette is resampled on a polar grid centred on its centroid, and the 2-D
//! Fourier transform of that grid (radial × angular frequency) is evaluated for
//! `0..=MAX_RADIAL_FREQ` × `0..=MAX_ANGULAR_FREQ`. Only magnitudes are kept
//! (rotation invariance); every coefficient is divided by the DC term (scale
//! invariance) except the DC term itself, which becomes an area ratio against
//! `2π·R_max²`.

use std::f64::consts::{PI, TAU};

use crate::error::{LeafError, Result};
use crate::imaging::{centroid, BinaryMask, Centroid};

pub const MAX_RADIAL_FREQ: usize = 4;
pub const MAX_ANGULAR_FREQ: usize = 6;
/// `(m + 1)(n + 1)` descriptor values.
pub const PFT_LEN: usize = (MAX_RADIAL_FREQ + 1) * (MAX_ANGULAR_FREQ + 1);

pub const DEFAULT_RADIAL_SAMPLES: usize = 64;
pub const DEFAULT_ANGULAR_SAMPLES: usize = 128;

/// Silhouette occupancy sampled at `radial × angular` polar positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    radial: usize,
    angular: usize,
    r_max: f64,
    /// Row-major by radius bin: `samples[k * angular + i]`.
    samples: Vec<f64>,
}

impl PolarGrid {
    pub fn new(radial: usize, angular: usize, r_max: f64, samples: Vec<f64>) -> Result<Self> {
        if radial < 8 || angular < 8 {
            return Err(LeafError::InvalidInput(format!("polar grid needs at least 8x8 bins, got {radial}x{angular}")));
        }
        if samples.len() != radial * angular {
            return Err(LeafError::InvalidInput("polar grid sample count mismatch".into()));
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(LeafError::InvalidInput("polar grid radius must be positive".into()));
        }
        if samples.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(LeafError::InvalidInput("polar grid samples must lie in [0, 1]".into()));
        }
        Ok(PolarGrid { radial, angular, r_max, samples })
    }

    pub fn radial(&self) -> usize {
        self.radial
    }

    pub fn angular(&self) -> usize {
        self.angular
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.samples[k * self.angular + i]
    }

    /// The same grid with the angle axis rotated by `shift` bins.
    pub fn shifted_angle(&self, shift: usize) -> PolarGrid {
        let mut samples = Vec::with_capacity(self.samples.len());
        for row in self.samples.chunks_exact(self.angular) {
            samples.extend((0..self.angular).map(|i| row[(i + shift) % self.angular]));
        }
        PolarGrid { samples, ..*self }
    }
}

/// `values[0]` is the DC area ratio; `values[ρ * 7 + φ]` for the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct PftDescriptor {
    pub values: [f64; PFT_LEN],
}

/// Samples the mask at radii `(k + 0.5)·R_max/radial` and angles `i·2π/angular`
/// around `center`.
///
/// Pixels are unit squares: a sample is 1 when it falls inside a foreground pixel's
/// square, and `R_max` is the distance from `center` to the farthest corner of any
/// foreground square. Under nearest-neighbour upscaling by an integer factor both
/// scale exactly with the shape, so the grid is unchanged.
pub fn polar_resample(mask: &BinaryMask, center: Centroid, radial: usize, angular: usize) -> Result<PolarGrid> {
    let r_max = mask
        .foreground()
        .map(|(x, y)| {
            let (dx, dy) = ((x as f64 - center.x).abs() + 0.5, (y as f64 - center.y).abs() + 0.5);
            dx.hypot(dy)
        })
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.max(d))))
        .ok_or_else(|| LeafError::EmptyRegion("polar resampling of an empty mask".into()))?;
    if !(r_max > 0.0) {
        return Err(LeafError::EmptyRegion("shape has zero radius".into()));
    }
    let mut samples = Vec::with_capacity(radial * angular);
    let trig: Vec<(f64, f64)> = (0..angular).map(|i| (TAU * i as f64 / angular as f64).sin_cos()).collect();
    for k in 0..radial {
        let r = (k as f64 + 0.5) * r_max / radial as f64;
        for &(sin, cos) in &trig {
            let inside = mask.get_signed((center.x + r * cos).round() as i64, (center.y + r * sin).round() as i64);
            samples.push(if inside { 1.0 } else { 0.0 });
        }
    }
    PolarGrid::new(radial, angular, r_max, samples)
}

/// Magnitude descriptors of the polar Fourier transform.
///
/// Each sample is weighted by the area of its annulus cell (`r_k·Δr·Δθ`), so the
/// double sum approximates the transform over the image plane and `|PF(0,0)|` is
/// the silhouette area in pixels².
pub fn pft_descriptors(grid: &PolarGrid) -> Result<PftDescriptor> {
    let (nr, nt) = (grid.radial, grid.angular);
    let dr = grid.r_max / nr as f64;
    let dtheta = TAU / nt as f64;

    // angular DFT per radius bin, then the radial sum
    let mut ang = vec![(0.0f64, 0.0f64); nr * (MAX_ANGULAR_FREQ + 1)];
    for k in 0..nr {
        let row = &grid.samples[k * nt..(k + 1) * nt];
        for phi in 0..=MAX_ANGULAR_FREQ {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &f) in row.iter().enumerate() {
                if f == 0.0 {
                    continue;
                }
                let a = TAU * ((i * phi) % nt) as f64 / nt as f64;
                re += f * a.cos();
                im -= f * a.sin();
            }
            ang[k * (MAX_ANGULAR_FREQ + 1) + phi] = (re, im);
        }
    }

    let mut mags = [0.0f64; PFT_LEN];
    for rho in 0..=MAX_RADIAL_FREQ {
        for phi in 0..=MAX_ANGULAR_FREQ {
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..nr {
                let w = (k as f64 + 0.5) * dr * dr * dtheta;
                let (ar, ai) = ang[k * (MAX_ANGULAR_FREQ + 1) + phi];
                let a = TAU * ((k * rho) % nr) as f64 / nr as f64;
                let (s, c) = a.sin_cos();
                // (ar + j ai)(c - j s)
                re += w * (ar * c + ai * s);
                im += w * (ai * c - ar * s);
            }
            mags[rho * (MAX_ANGULAR_FREQ + 1) + phi] = re.hypot(im);
        }
    }

    let dc = mags[0];
    if !(dc > 0.0) {
        return Err(LeafError::EmptyRegion("polar transform has zero DC term".into()));
    }
    let mut values = [0.0f64; PFT_LEN];
    values[0] = dc / (2.0 * PI * grid.r_max * grid.r_max);
    for j in 1..PFT_LEN {
        values[j] = mags[j] / dc;
    }
    Ok(PftDescriptor { values })
}

/// Descriptors of a silhouette, computed in the frame of its bounding box so that
/// integer translations of the mask give bit-identical values.
pub fn pft_from_mask(mask: &BinaryMask, radial: usize, angular: usize) -> Result<PftDescriptor> {
    let (x0, y0, x1, y1) =
        mask.bounding_box().ok_or_else(|| LeafError::EmptyRegion("polar transform of an empty mask".into()))?;
    let crop = BinaryMask::from_fn(x1 - x0 + 1, y1 - y0 + 1, |x, y| mask.get(x + x0, y + y0));
    let grid = polar_resample(&crop, centroid(&crop)?, radial, angular)?;
    pft_descriptors(&grid)
}
