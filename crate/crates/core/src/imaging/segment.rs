//! Leaf/background separation: Otsu threshold, largest 8-connected component, hole filling.

use std::collections::VecDeque;

use super::raster::{BinaryMask, GrayImage};
use crate::error::{LeafError, Result};

const NEIGHBOURS_8: [(i64, i64); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];
const NEIGHBOURS_4: [(i64, i64); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];

/// Otsu's threshold on a 256-bin histogram.
///
/// Returns the smallest `t` maximising the between-class variance of the split
/// `{v <= t} / {v > t}`, or `None` when fewer than two levels are populated.
pub fn otsu_threshold(hist: &[u64; 256]) -> Option<u8> {
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return None;
    }
    let sum_all: f64 = hist.iter().enumerate().map(|(v, &c)| v as f64 * c as f64).sum();
    let mut w0 = 0u64;
    let mut sum0 = 0.0;
    let mut best: Option<(u8, f64)> = None;
    for (t, &count) in hist.iter().enumerate().take(255) {
        w0 += count;
        sum0 += t as f64 * count as f64;
        let w1 = total - w0;
        if w0 == 0 || w1 == 0 {
            continue;
        }
        let mu0 = sum0 / w0 as f64;
        let mu1 = (sum_all - sum0) / w1 as f64;
        let between = w0 as f64 * w1 as f64 * (mu0 - mu1) * (mu0 - mu1);
        if best.is_none_or(|(_, b)| between > b) {
            best = Some((t as u8, between));
        }
    }
    best.map(|(t, _)| t)
}

pub fn histogram(values: impl IntoIterator<Item = u8>) -> [u64; 256] {
    let mut hist = [0u64; 256];
    for v in values {
        hist[v as usize] += 1;
    }
    hist
}

/// Keeps only the largest 8-connected foreground component. Ties go to the
/// component found first in raster order.
pub fn largest_component(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let mut label = vec![0u32; w * h];
    let mut best = (0u32, 0usize);
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !mask.as_raw()[start] || label[start] != 0 {
            continue;
        }
        next += 1;
        label[start] = next;
        queue.push_back(start);
        let mut size = 0usize;
        while let Some(i) = queue.pop_front() {
            size += 1;
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in NEIGHBOURS_8 {
                let (nx, ny) = (x + dx, y + dy);
                if mask.get_signed(nx, ny) {
                    let j = ny as usize * w + nx as usize;
                    if label[j] == 0 {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        if size > best.1 {
            best = (next, size);
        }
    }
    let keep = best.0;
    BinaryMask::from_fn(w, h, |x, y| keep != 0 && label[y * w + x] == keep)
}

/// Fills background regions that cannot be reached from the raster border
/// through 4-connected background pixels.
pub fn fill_holes(mask: &BinaryMask) -> BinaryMask {
    let outside = border_background(mask);
    let (w, h) = (mask.width(), mask.height());
    BinaryMask::from_fn(w, h, |x, y| mask.get(x, y) || !outside[y * w + x])
}

/// Background pixels 4-connected to the raster border.
pub(crate) fn border_background(mask: &BinaryMask) -> Vec<bool> {
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            let on_border = x == 0 || y == 0 || x + 1 == w || y + 1 == h;
            if on_border && !mask.get(x, y) {
                seen[y * w + x] = true;
                queue.push_back((x as i64, y as i64));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for (dx, dy) in NEIGHBOURS_4 {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let j = ny as usize * w + nx as usize;
            if !seen[j] && !mask.as_raw()[j] {
                seen[j] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    seen
}

/// Number of 8-connected foreground components.
pub fn count_components(mask: &BinaryMask) -> usize {
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !mask.as_raw()[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in NEIGHBOURS_8 {
                let (nx, ny) = (x + dx, y + dy);
                if mask.get_signed(nx, ny) {
                    let j = ny as usize * w + nx as usize;
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    count
}

/// Segments a single leaf lying on a near-uniform background.
///
/// Pixels at or below the Otsu threshold form the candidate foreground. When the
/// darker class dominates the raster border the polarity is flipped and the
/// brighter class is taken instead. The largest 8-connected component is kept and
/// its holes are filled.
pub fn segment_leaf(gray: &GrayImage) -> Result<BinaryMask> {
    let t = otsu_threshold(&histogram(gray.as_raw().iter().copied()))
        .ok_or_else(|| LeafError::Segmentation("image has a single intensity level, no foreground".into()))?;
    let (w, h) = (gray.width(), gray.height());

    let (mut dark_border, mut bright_border) = (0usize, 0usize);
    for y in 0..h {
        for x in 0..w {
            if x == 0 || y == 0 || x + 1 == w || y + 1 == h {
                if gray.get(x, y) <= t {
                    dark_border += 1;
                } else {
                    bright_border += 1;
                }
            }
        }
    }
    let leaf_is_dark = dark_border <= bright_border;
    let candidate = BinaryMask::from_fn(w, h, |x, y| (gray.get(x, y) <= t) == leaf_is_dark);
    if candidate.is_empty() {
        return Err(LeafError::Segmentation("empty foreground after thresholding".into()));
    }
    Ok(fill_holes(&largest_component(&candidate)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk_image(size: usize, cx: f64, cy: f64, r: f64) -> GrayImage {
        GrayImage::from_fn(size, size, |x, y| {
            let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
            if d2 <= r * r {
                0
            } else {
                255
            }
        })
    }

    #[test]
    fn otsu_separates_two_levels() {
        let mut hist = [0u64; 256];
        hist[10] = 50;
        hist[200] = 70;
        let t = otsu_threshold(&hist).unwrap();
        assert!((10..200).contains(&t));
        assert_eq!(otsu_threshold(&histogram([7u8; 20])), None);
        assert_eq!(otsu_threshold(&[0; 256]), None);
    }

    #[test]
    fn black_disk_on_white() {
        let gray = disk_image(40, 20.0, 20.0, 12.0);
        let mask = segment_leaf(&gray).unwrap();
        for y in 0..40 {
            for x in 0..40 {
                assert_eq!(mask.get(x, y), gray.get(x, y) == 0);
            }
        }
    }

    #[test]
    fn white_image_fails() {
        let gray = GrayImage::filled(10, 10, 255);
        assert!(matches!(segment_leaf(&gray), Err(LeafError::Segmentation(_))));
    }

    #[test]
    fn interior_hole_is_filled() {
        let mut gray = disk_image(40, 20.0, 20.0, 12.0);
        gray.set(20, 20, 255);
        let mask = segment_leaf(&gray).unwrap();
        assert!(mask.get(20, 20));
        // oracle: no background pixel is unreachable from the border
        assert!(border_background(&mask).iter().zip(mask.as_raw()).all(|(&out, &fg)| out || fg));
    }

    #[test]
    fn smaller_blobs_are_discarded() {
        let gray = GrayImage::from_fn(50, 50, |x, y| {
            let big = (x as f64 - 15.0).powi(2) + (y as f64 - 15.0).powi(2) <= 100.0;
            let small = (x as f64 - 40.0).powi(2) + (y as f64 - 40.0).powi(2) <= 9.0;
            if big || small {
                30
            } else {
                240
            }
        });
        let mask = segment_leaf(&gray).unwrap();
        assert_eq!(count_components(&mask), 1);
        assert!(mask.get(15, 15) && !mask.get(40, 40));
    }

    #[test]
    fn polarity_flips_for_bright_leaf_on_dark_background() {
        let gray = GrayImage::from_fn(40, 40, |x, y| {
            let d2 = (x as f64 - 20.0).powi(2) + (y as f64 - 20.0).powi(2);
            if d2 <= 100.0 {
                220
            } else {
                15
            }
        });
        let mask = segment_leaf(&gray).unwrap();
        assert!(mask.get(20, 20) && !mask.get(0, 0));
    }
}
