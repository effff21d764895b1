//! Seeded synthetic leaves for tests, examples and smoke runs.
//!
//! Each species has a fixed outline (lobes, aspect, serration), colour and vein
//! spacing; each sample jitters rotation, scale, position and colour.

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::harness::{build_manifest, DatasetManifest, ManifestLayout};
use crate::imaging::ImageRgb;

/// Shape and appearance of one synthetic species.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpecies {
    pub lobes: u32,
    pub lobe_depth: f64,
    /// Length over width.
    pub aspect: f64,
    pub teeth: u32,
    pub color: [f64; 3],
    pub vein_spacing: f64,
    pub vein_gain: f64,
}

impl SynthSpecies {
    /// Deterministic species `k`; neighbouring indices differ in several traits.
    pub fn nth(k: usize) -> SynthSpecies {
        let lobes = [0, 3, 5, 7][k % 4];
        SynthSpecies {
            lobes,
            lobe_depth: if lobes == 0 { 0.0 } else { 0.12 + 0.06 * ((k / 4) % 3) as f64 },
            aspect: 1.0 + 0.35 * ((k % 3) as f64),
            teeth: [0, 24, 40][(k / 2) % 3],
            color: [40.0 + 17.0 * (k % 5) as f64, 110.0 + 11.0 * (k % 7) as f64, 30.0 + 13.0 * (k % 4) as f64],
            vein_spacing: 6.0 + 2.0 * (k % 4) as f64,
            vein_gain: 25.0 + 8.0 * (k % 3) as f64,
        }
    }

    /// Renders one sample on a white `size × size` canvas.
    pub fn render(&self, size: usize, rng: &mut impl Rng) -> ImageRgb {
        let s = size as f64;
        let angle = rng.gen_range(0.0..2.0 * PI);
        let radius = s * rng.gen_range(0.27..0.31);
        let aspect = self.aspect * rng.gen_range(0.97..1.03);
        let (cx, cy) = (s / 2.0 + rng.gen_range(-3.0..3.0), s / 2.0 + rng.gen_range(-3.0..3.0));
        let tint: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-6.0..6.0));
        let (sin, cos) = angle.sin_cos();
        let mut noise = ChaCha8Rng::seed_from_u64(rng.gen());
        ImageRgb::from_fn(size, size, |x, y| {
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            // leaf frame: u along the midrib, v across it
            let u = dx * cos + dy * sin;
            let v = -dx * sin + dy * cos;
            let (a, b) = (radius, radius / aspect);
            let theta = (v * a).atan2(u * b);
            let mut edge = 1.0 + self.lobe_depth * (self.lobes as f64 * theta).cos();
            if self.teeth > 0 {
                edge += 0.025 * (self.teeth as f64 * theta).sin().abs();
            }
            let r = ((u / a).powi(2) + (v / b).powi(2)).sqrt();
            let jitter: f64 = noise.gen_range(-4.0..4.0);
            if r > edge {
                return [(245.0 + jitter).round() as u8; 3];
            }
            let midrib = v.abs() < 1.0;
            let lateral = ((u - 0.8 * v.abs()).rem_euclid(self.vein_spacing)) < 1.6 && r < 0.85 * edge;
            let gain = if midrib || lateral { self.vein_gain } else { 0.0 };
            std::array::from_fn(|c| (self.color[c] + tint[c] + gain + jitter).clamp(0.0, 255.0).round() as u8)
        })
    }
}

pub fn species_name(k: usize) -> String {
    format!("species-{k:02}")
}

/// Generator stream for sample `i` of species `k`.
pub fn sample_rng(seed: u64, k: usize, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((k as u64) << 32) | i as u64);
    rng
}

/// Writes `classes × per_class` PNG leaves as `root/species-KK/leaf-III.png`
/// and returns the class-subdirectory manifest.
pub fn write_dataset(
    root: impl AsRef<Path>,
    classes: usize,
    per_class: usize,
    size: usize,
    seed: u64,
) -> Result<DatasetManifest> {
    let root = root.as_ref();
    for k in 0..classes {
        let species = SynthSpecies::nth(k);
        let dir = root.join(species_name(k));
        std::fs::create_dir_all(&dir)?;
        for i in 0..per_class {
            species.render(size, &mut sample_rng(seed, k, i)).save_png(dir.join(format!("leaf-{i:03}.png")))?;
        }
    }
    build_manifest(root, ManifestLayout::ClassSubdirs)
}
