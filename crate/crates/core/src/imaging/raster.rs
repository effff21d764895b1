//! Raster containers: RGB input images, 8-bit gray images and binary masks.

use std::path::Path;

use image::ImageError;

use crate::error::{LeafError, Result};

/// Integer pixel coordinate. `x` is the column, `y` the row (growing downwards).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }
}

/// An 8-bit RGB raster stored row-major, three bytes per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRgb {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ImageRgb {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(LeafError::InvalidInput("image dimensions must be nonzero".into()));
        }
        if data.len() != width * height * 3 {
            return Err(LeafError::InvalidInput(format!(
                "expected {} bytes for a {width}x{height} RGB image, got {}",
                width * height * 3,
                data.len()
            )));
        }
        Ok(ImageRgb { width, height, data })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        let data = rgb.iter().copied().cycle().take(width * height * 3).collect();
        ImageRgb { width, height, data }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        ImageRgb { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    /// Values of one channel (0 = R, 1 = G, 2 = B) in raster order.
    pub fn channel(&self, c: usize) -> impl Iterator<Item = u8> + '_ {
        self.data.iter().skip(c).step_by(3).copied()
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        image::save_buffer(
            path.as_ref(),
            &self.data,
            self.width as u32,
            self.height as u32,
            image::ExtendedColorType::Rgb8,
        )
        .map_err(map_image_error)
    }
}

/// An 8-bit single-channel raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(LeafError::InvalidInput("image dimensions must be nonzero".into()));
        }
        if data.len() != width * height {
            return Err(LeafError::InvalidInput(format!(
                "expected {} bytes for a {width}x{height} gray image, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(GrayImage { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        GrayImage { width, height, data: vec![value; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        GrayImage { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn as_raw_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        image::save_buffer(
            path.as_ref(),
            &self.data,
            self.width as u32,
            self.height as u32,
            image::ExtendedColorType::L8,
        )
        .map_err(map_image_error)
    }
}

/// A boolean raster; `true` marks foreground (leaf) pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be nonzero");
        BinaryMask { width, height, data: vec![false; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = BinaryMask::new(width, height);
        for y in 0..height {
            for x in 0..width {
                mask.data[y * width + x] = f(x, y);
            }
        }
        mask
    }

    /// Builds a mask from rows of `'#'` (foreground) and any other character (background).
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        BinaryMask::from_fn(width, height, |x, y| rows[y].as_bytes().get(x) == Some(&b'#'))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    /// Like [`get`](Self::get) but returns `false` outside the raster.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.data[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn as_raw(&self) -> &[bool] {
        &self.data
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|&b| b)
    }

    /// Foreground pixel coordinates in raster order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.data.iter().enumerate().filter(|(_, &b)| b).map(move |(i, _)| (i % w, i / w))
    }

    /// Inclusive bounding box `(min_x, min_y, max_x, max_y)` of the foreground.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bb: Option<(usize, usize, usize, usize)> = None;
        for (x, y) in self.foreground() {
            bb = Some(match bb {
                None => (x, y, x, y),
                Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
            });
        }
        bb
    }

    /// Mask with every foreground pixel removed that has a background (or out-of-raster)
    /// 8-neighbour.
    pub fn eroded(&self) -> BinaryMask {
        let mut out = BinaryMask::new(self.width, self.height);
        for (x, y) in self.foreground() {
            let (xi, yi) = (x as i64, y as i64);
            let interior = (-1..=1).all(|dy| (-1..=1).all(|dx| self.get_signed(xi + dx, yi + dy)));
            out.set(x, y, interior);
        }
        out
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        }
    }

    /// Writes the mask as an 8-bit PNG with foreground = 255.
    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        self.to_gray().save_png(path)
    }
}

pub(crate) fn map_image_error(e: ImageError) -> LeafError {
    match e {
        ImageError::IoError(io) => LeafError::Io(io),
        other => LeafError::Format(other.to_string()),
    }
}

/// Decodes a PNG or JPEG file into an 8-bit RGB raster.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageRgb> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let format = image::guess_format(&bytes).map_err(map_image_error)?;
    if !matches!(format, image::ImageFormat::Png | image::ImageFormat::Jpeg) {
        return Err(LeafError::Format(format!("{format:?} is not a supported format")));
    }
    // the bytes are already in memory; any decoder failure means a corrupt file
    let decoded = image::load_from_memory_with_format(&bytes, format).map_err(|e| LeafError::Format(e.to_string()))?;
    let rgb = decoded.to_rgb8();
    let (w, h) = rgb.dimensions();
    ImageRgb::new(w as usize, h as usize, rgb.into_raw())
}

/// Luma conversion with weights 0.299 / 0.587 / 0.114, rounded to nearest.
pub fn to_grayscale(img: &ImageRgb) -> GrayImage {
    let data = img
        .as_raw()
        .chunks_exact(3)
        .map(|p| {
            let v = 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64;
            v.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage { width: img.width, height: img.height, data }
}
