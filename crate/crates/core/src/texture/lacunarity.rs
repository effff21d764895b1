use crate::color::foreground_channels;
use crate::error::Result;
use crate::imaging::{BinaryMask, GrayImage, ImageRgb};

pub const LACUNARITY_LEN: usize = 20;

/// Mean-normalised deviation statistics of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Lacunarity {
    /// `mean(P²)/mean(P)² - 1`
    pub ls: f64,
    /// `mean(|P/mean(P) - 1|)`
    pub la: f64,
    /// `mean((P/mean(P) - 1)^p)^(1/p)` for p = 2, 4, 6.
    pub l2: f64,
    pub l4: f64,
    pub l6: f64,
}

impl Lacunarity {
    /// Global lacunarity of a sample. A zero (or empty) mean gives all zeros.
    pub fn of(values: &[f64]) -> Lacunarity {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        if !(mean > 0.0) {
            return Lacunarity::default();
        }
        let (mut sq, mut a, mut p2, mut p4, mut p6) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &v in values {
            sq += v * v;
            let e = v / mean - 1.0;
            let e2 = e * e;
            a += e.abs();
            p2 += e2;
            p4 += e2 * e2;
            p6 += e2 * e2 * e2;
        }
        Lacunarity {
            ls: (sq / n) / (mean * mean) - 1.0,
            la: a / n,
            l2: (p2 / n).sqrt(),
            l4: (p4 / n).powf(0.25),
            l6: (p6 / n).powf(1.0 / 6.0),
        }
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.ls, self.la, self.l2, self.l4, self.l6]
    }
}

/// Per channel (R, G, B, gray) over the foreground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LacunarityFeatures {
    pub channels: [Lacunarity; 4],
}

impl LacunarityFeatures {
    pub fn to_array(&self) -> [f64; LACUNARITY_LEN] {
        let mut out = [0.0; LACUNARITY_LEN];
        for (c, l) in self.channels.iter().enumerate() {
            out[5 * c..5 * c + 5].copy_from_slice(&l.to_array());
        }
        out
    }
}

pub fn lacunarity_features(img: &ImageRgb, gray: &GrayImage, mask: &BinaryMask) -> Result<LacunarityFeatures> {
    let chans = foreground_channels(img, gray, mask)?;
    Ok(LacunarityFeatures { channels: chans.each_ref().map(|v| Lacunarity::of(v)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::to_grayscale;

    #[test]
    fn constant_channel_is_zero() {
        assert_eq!(Lacunarity::of(&[42.0; 9]), Lacunarity::default());
        assert_eq!(Lacunarity::of(&[0.0; 9]), Lacunarity::default());
    }

    #[test]
    fn two_pixel_example() {
        let l = Lacunarity::of(&[1.0, 3.0]);
        assert_eq!(l.to_array(), [0.25, 0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn features_over_foreground() {
        let img = ImageRgb::from_fn(6, 6, |x, y| [(10 + x * 20) as u8, (5 + y * 11) as u8, 90]);
        let mask = BinaryMask::from_fn(6, 6, |x, y| x > 0 && y > 1);
        let f = lacunarity_features(&img, &to_grayscale(&img), &mask).unwrap();
        assert_eq!(f.channels[2], Lacunarity::default());
        assert!(f.channels[0].ls > 0.0);
        assert!(lacunarity_features(&img, &to_grayscale(&img), &BinaryMask::new(6, 6)).is_err());
    }
}
