use crate::error::{LeafError, Result};
use crate::imaging::{BinaryMask, GrayImage};

pub const DEFAULT_GLCM_LEVELS: usize = 8;
pub const GLCM_LEN: usize = 5;

/// Neighbour offset of a co-occurrence pair at distance 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlcmDirection {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl GlcmDirection {
    pub const ALL: [GlcmDirection; 4] =
        [GlcmDirection::Deg0, GlcmDirection::Deg45, GlcmDirection::Deg90, GlcmDirection::Deg135];

    /// `(dx, dy)` in raster coordinates (y grows downwards, angles counter-clockwise
    /// on screen).
    pub fn offset(self) -> (i64, i64) {
        match self {
            GlcmDirection::Deg0 => (1, 0),
            GlcmDirection::Deg45 => (1, -1),
            GlcmDirection::Deg90 => (0, -1),
            GlcmDirection::Deg135 => (-1, -1),
        }
    }
}

/// Normalised, symmetric gray-level co-occurrence matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    p: Vec<f64>,
}

impl Glcm {
    /// Builds a GLCM from raw frequencies, normalising them to sum 1.
    pub fn from_counts(levels: usize, counts: Vec<f64>) -> Result<Glcm> {
        if counts.len() != levels * levels {
            return Err(LeafError::InvalidInput("GLCM must be levels x levels".into()));
        }
        if counts.iter().any(|&c| !(c >= 0.0) || !c.is_finite()) {
            return Err(LeafError::InvalidInput("GLCM entries must be finite and nonnegative".into()));
        }
        let total: f64 = counts.iter().sum();
        if !(total > 0.0) {
            return Err(LeafError::EmptyRegion("GLCM has no co-occurrence pairs".into()));
        }
        Ok(Glcm { levels, p: counts.into_iter().map(|c| c / total).collect() })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `p(i, j)` for 0-based bins.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }
}

#[inline]
pub(crate) fn quantize(v: u8, levels: usize) -> usize {
    v as usize * levels / 256
}

/// Co-occurrences of quantised intensities at distance 1 along `direction`.
///
/// A pair counts only when both pixels are foreground, and it is counted in both
/// orders, so the matrix is symmetric.
pub fn compute_glcm(gray: &GrayImage, mask: &BinaryMask, levels: usize, direction: GlcmDirection) -> Result<Glcm> {
    if !(2..=256).contains(&levels) {
        return Err(LeafError::InvalidInput(format!("GLCM levels must be in 2..=256, got {levels}")));
    }
    if (gray.width(), gray.height()) != (mask.width(), mask.height()) {
        return Err(LeafError::InvalidInput("gray image and mask dimensions differ".into()));
    }
    let (dx, dy) = direction.offset();
    let mut counts = vec![0u64; levels * levels];
    for (x, y) in mask.foreground() {
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        if !mask.get_signed(nx, ny) {
            continue;
        }
        let a = quantize(gray.get(x, y), levels);
        let b = quantize(gray.get(nx as usize, ny as usize), levels);
        counts[a * levels + b] += 1;
        counts[b * levels + a] += 1;
    }
    Glcm::from_counts(levels, counts.into_iter().map(|c| c as f64).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaralickFeatures {
    pub asm: f64,
    pub contrast: f64,
    pub idm: f64,
    pub entropy: f64,
    pub correlation: f64,
}

impl HaralickFeatures {
    pub fn to_array(&self) -> [f64; GLCM_LEN] {
        [self.asm, self.contrast, self.idm, self.entropy, self.correlation]
    }
}

/// Angular second moment (Σp²), contrast, inverse difference moment with the
/// `1 + (i-j)²` denominator, entropy `-Σ p ln p`, and correlation normalised by the
/// marginal standard deviations. Bins are indexed from 1. A GLCM with zero marginal
/// variance has correlation 0.
pub fn haralick_features(glcm: &Glcm) -> HaralickFeatures {
    let l = glcm.levels;
    let (mut asm, mut contrast, mut idm, mut entropy) = (0.0, 0.0, 0.0, 0.0);
    let (mut mu_i, mut mu_j, mut sum_ij) = (0.0, 0.0, 0.0);
    for i in 0..l {
        for j in 0..l {
            let p = glcm.get(i, j);
            if p == 0.0 {
                continue;
            }
            let (fi, fj) = ((i + 1) as f64, (j + 1) as f64);
            let d = fi - fj;
            asm += p * p;
            contrast += d * d * p;
            idm += p / (1.0 + d * d);
            entropy -= p * p.ln();
            mu_i += fi * p;
            mu_j += fj * p;
            sum_ij += fi * fj * p;
        }
    }
    let (mut var_i, mut var_j) = (0.0, 0.0);
    for i in 0..l {
        for j in 0..l {
            let p = glcm.get(i, j);
            var_i += p * ((i + 1) as f64 - mu_i).powi(2);
            var_j += p * ((j + 1) as f64 - mu_j).powi(2);
        }
    }
    let correlation =
        if var_i > 0.0 && var_j > 0.0 { (sum_ij - mu_i * mu_j) / (var_i.sqrt() * var_j.sqrt()) } else { 0.0 };
    HaralickFeatures { asm, contrast, idm, entropy: entropy.max(0.0), correlation }
}

/// Haralick features averaged over the four directions.
pub fn glcm_feature_vector(gray: &GrayImage, mask: &BinaryMask, levels: usize) -> Result<[f64; GLCM_LEN]> {
    let mut acc = [0.0; GLCM_LEN];
    for dir in GlcmDirection::ALL {
        let h = haralick_features(&compute_glcm(gray, mask, levels, dir)?).to_array();
        for (a, v) in acc.iter_mut().zip(h) {
            *a += v;
        }
    }
    Ok(acc.map(|v| v / 4.0))
}
