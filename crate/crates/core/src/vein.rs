//! Vein density from morphological top-hat residuals.
//!
//! For each disk radius 1..=4 the gray leaf is opened, the opening is subtracted
//! from the leaf (white top-hat), the residual is binarised with Otsu's threshold
//! over the leaf, and the pixels that survive inside the leaf minus its one-pixel
//! margin are counted.

use serde::{Deserialize, Serialize};

use crate::error::{LeafError, Result};
use crate::imaging::{histogram, otsu_threshold, BinaryMask, GrayImage};
use crate::morphology::gray_opening;

pub const VEIN_LEN: usize = 4;
pub const VEIN_RADII: [usize; VEIN_LEN] = [1, 2, 3, 4];

/// Whether veins are lighter or darker than the lamina.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VeinPolarity {
    #[default]
    Bright,
    Dark,
}

impl std::str::FromStr for VeinPolarity {
    type Err = LeafError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bright" => Ok(VeinPolarity::Bright),
            "dark" => Ok(VeinPolarity::Dark),
            other => Err(LeafError::Config(format!("unknown vein polarity `{other}`"))),
        }
    }
}

impl std::fmt::Display for VeinPolarity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VeinPolarity::Bright => "bright",
            VeinPolarity::Dark => "dark",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VeinFeatures {
    /// `counts[k] / area`
    pub ratios: [f64; VEIN_LEN],
    pub counts: [usize; VEIN_LEN],
    pub area: usize,
}

/// Top-hat residual and binarised vein mask for one radius.
#[derive(Debug, Clone)]
pub struct VeinLayer {
    pub radius: usize,
    pub residual: GrayImage,
    pub veins: BinaryMask,
}

/// Background pixels are replaced by white before opening, so the result depends
/// only on leaf pixels and the leaf edge does not produce a top-hat rim.
fn working_image(gray: &GrayImage, mask: &BinaryMask, polarity: VeinPolarity) -> GrayImage {
    GrayImage::from_fn(gray.width(), gray.height(), |x, y| {
        if !mask.get(x, y) {
            return u8::MAX;
        }
        match polarity {
            VeinPolarity::Bright => gray.get(x, y),
            VeinPolarity::Dark => u8::MAX - gray.get(x, y),
        }
    })
}

pub fn vein_layers(gray: &GrayImage, mask: &BinaryMask, polarity: VeinPolarity) -> Result<Vec<VeinLayer>> {
    if (gray.width(), gray.height()) != (mask.width(), mask.height()) {
        return Err(LeafError::InvalidInput("gray image and mask dimensions differ".into()));
    }
    let inner = mask.eroded();
    if inner.is_empty() {
        return Err(LeafError::EmptyRegion("leaf vanishes after removing its margin".into()));
    }
    let work = working_image(gray, mask, polarity);
    let (w, h) = (gray.width(), gray.height());
    let layers = VEIN_RADII
        .iter()
        .map(|&radius| {
            let opened = gray_opening(&work, radius);
            let residual =
                GrayImage::from_fn(w, h, |x, y| if mask.get(x, y) { work.get(x, y) - opened.get(x, y) } else { 0 });
            let threshold = otsu_threshold(&histogram(mask.foreground().map(|(x, y)| residual.get(x, y))));
            let veins =
                BinaryMask::from_fn(w, h, |x, y| inner.get(x, y) && threshold.is_some_and(|t| residual.get(x, y) > t));
            VeinLayer { radius, residual, veins }
        })
        .collect();
    Ok(layers)
}

pub fn vein_features(gray: &GrayImage, mask: &BinaryMask, polarity: VeinPolarity) -> Result<VeinFeatures> {
    let layers = vein_layers(gray, mask, polarity)?;
    let area = mask.count();
    let mut counts = [0usize; VEIN_LEN];
    for (c, layer) in counts.iter_mut().zip(&layers) {
        *c = layer.veins.count();
    }
    Ok(VeinFeatures { ratios: counts.map(|c| c as f64 / area as f64), counts, area })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf_mask() -> BinaryMask {
        BinaryMask::from_fn(40, 30, |x, y| (3..37).contains(&x) && (3..27).contains(&y))
    }

    #[test]
    fn constant_leaf_has_no_veins() {
        let gray = GrayImage::filled(40, 30, 90);
        let f = vein_features(&gray, &leaf_mask(), VeinPolarity::Bright).unwrap();
        assert_eq!(f.ratios, [0.0; 4]);
    }

    #[test]
    fn thin_bright_line() {
        let mask = leaf_mask();
        let gray = GrayImage::from_fn(40, 30, |x, y| if y == 15 && (10..30).contains(&x) { 200 } else { 60 });
        let f = vein_features(&gray, &mask, VeinPolarity::Bright).unwrap();
        assert_eq!(f.counts[0], 20);
        assert_eq!(f.ratios[0], 20.0 / mask.count() as f64);
        assert!(f.ratios.iter().all(|v| (0.0..=1.0).contains(v)));
        assert!(f.counts.iter().all(|&c| c <= f.area));
    }

    #[test]
    fn dark_polarity_inverts() {
        let mask = leaf_mask();
        let gray = GrayImage::from_fn(40, 30, |x, y| if y == 15 && (10..30).contains(&x) { 20 } else { 160 });
        assert_eq!(vein_features(&gray, &mask, VeinPolarity::Dark).unwrap().counts[0], 20);
        assert_eq!(vein_features(&gray, &mask, VeinPolarity::Bright).unwrap().counts[0], 0);
    }

    #[test]
    fn background_values_do_not_matter() {
        let mask = leaf_mask();
        let a = GrayImage::from_fn(40, 30, |x, y| ((x * 13 + y * 7) % 200) as u8 + 20);
        let b = GrayImage::from_fn(40, 30, |x, y| if mask.get(x, y) { a.get(x, y) } else { ((x * y) % 256) as u8 });
        assert_eq!(
            vein_features(&a, &mask, VeinPolarity::Bright).unwrap(),
            vein_features(&b, &mask, VeinPolarity::Bright).unwrap()
        );
    }

    #[test]
    fn tiny_leaf_errors() {
        let mask = BinaryMask::from_ascii(&["##", "##"]);
        assert!(vein_features(&GrayImage::filled(2, 2, 9), &mask, VeinPolarity::Bright).is_err());
    }
}
