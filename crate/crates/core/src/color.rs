//! Color moments (mean, standard deviation, skewness, excess kurtosis) of the leaf
//! region on the R, G, B and gray channels.

use crate::error::{LeafError, Result};
use crate::imaging::{BinaryMask, GrayImage, ImageRgb};

pub const COLOR_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
    pub skew: f64,
    /// Excess kurtosis (normal distribution = 0).
    pub kurt: f64,
}

impl Moments {
    /// Population moments. A zero-variance sample reports `skew = kurt = 0`.
    pub fn of(values: &[f64]) -> Option<Moments> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
        for &v in values {
            let e = v - mean;
            let e2 = e * e;
            s2 += e2;
            s3 += e2 * e;
            s4 += e2 * e2;
        }
        let var = s2 / n;
        let std = var.sqrt();
        if var == 0.0 {
            return Some(Moments { mean, std: 0.0, skew: 0.0, kurt: 0.0 });
        }
        Some(Moments { mean, std, skew: s3 / (n * var * std), kurt: s4 / (n * var * var) - 3.0 })
    }
}

/// Moments per channel, in the order R, G, B, gray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorMoments {
    pub channels: [Moments; 4],
}

impl ColorMoments {
    /// `[μ, σ, skew, kurt]` for R, then G, B and gray.
    pub fn to_array(&self) -> [f64; COLOR_LEN] {
        let mut out = [0.0; COLOR_LEN];
        for (c, m) in self.channels.iter().enumerate() {
            out[4 * c..4 * c + 4].copy_from_slice(&[m.mean, m.std, m.skew, m.kurt]);
        }
        out
    }
}

/// Foreground values of each channel: R, G, B, gray.
pub(crate) fn foreground_channels(img: &ImageRgb, gray: &GrayImage, mask: &BinaryMask) -> Result<[Vec<f64>; 4]> {
    if (img.width(), img.height()) != (mask.width(), mask.height())
        || (gray.width(), gray.height()) != (mask.width(), mask.height())
    {
        return Err(LeafError::InvalidInput("image, gray and mask dimensions differ".into()));
    }
    let mut out: [Vec<f64>; 4] = Default::default();
    for (x, y) in mask.foreground() {
        let [r, g, b] = img.get(x, y);
        out[0].push(r as f64);
        out[1].push(g as f64);
        out[2].push(b as f64);
        out[3].push(gray.get(x, y) as f64);
    }
    if out[0].is_empty() {
        return Err(LeafError::EmptyRegion("no foreground pixels".into()));
    }
    Ok(out)
}

pub fn color_moments(img: &ImageRgb, gray: &GrayImage, mask: &BinaryMask) -> Result<ColorMoments> {
    let chans = foreground_channels(img, gray, mask)?;
    let mut channels = [Moments::default(); 4];
    for (slot, values) in channels.iter_mut().zip(&chans) {
        *slot = Moments::of(values).expect("nonempty foreground");
    }
    Ok(ColorMoments { channels })
}
