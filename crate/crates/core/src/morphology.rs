//! Flat grayscale morphology with disk structuring elements.
//!
//! Pixels outside the raster are ignored (erosion behaves as if they were +∞,
//! dilation as if they were -∞), which keeps erosion and dilation adjoint so the
//! opening stays anti-extensive, increasing and idempotent at the borders too.

use crate::imaging::GrayImage;

/// Offsets `(dx, dy)` with `dx² + dy² <= radius²`.
pub fn disk_offsets(radius: usize) -> Vec<(i64, i64)> {
    let r = radius as i64;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                out.push((dx, dy));
            }
        }
    }
    out
}

fn filter(img: &GrayImage, radius: usize, pick_min: bool) -> GrayImage {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let offsets = disk_offsets(radius);
    // Horizontal runs of the disk, one per dy: [x - half, x + half].
    let r = radius as i64;
    let runs: Vec<(i64, i64)> =
        (-r..=r).map(|dy| (dy, offsets.iter().filter(|o| o.1 == dy).map(|o| o.0).max().unwrap_or(0))).collect();
    let src = img.as_raw();
    let mut out = GrayImage::filled(img.width(), img.height(), 0);
    let dst = out.as_raw_mut();
    for y in 0..h {
        for x in 0..w {
            let mut acc: u8 = if pick_min { u8::MAX } else { u8::MIN };
            for &(dy, half) in &runs {
                let yy = y + dy;
                if yy < 0 || yy >= h {
                    continue;
                }
                let row = &src[(yy * w) as usize..((yy + 1) * w) as usize];
                let (lo, hi) = ((x - half).max(0) as usize, (x + half).min(w - 1) as usize);
                let seg = &row[lo..=hi];
                acc = if pick_min {
                    seg.iter().fold(acc, |a, &v| a.min(v))
                } else {
                    seg.iter().fold(acc, |a, &v| a.max(v))
                };
            }
            dst[(y * w + x) as usize] = acc;
        }
    }
    out
}

pub fn gray_erode(img: &GrayImage, radius: usize) -> GrayImage {
    filter(img, radius, true)
}

pub fn gray_dilate(img: &GrayImage, radius: usize) -> GrayImage {
    filter(img, radius, false)
}

/// Erosion followed by dilation with a flat disk of the given radius.
pub fn gray_opening(img: &GrayImage, radius: usize) -> GrayImage {
    gray_dilate(&gray_erode(img, radius), radius)
}
