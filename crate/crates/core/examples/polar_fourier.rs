//! Polar Fourier descriptors, and their stability under rotation.
//!
//! ```text
//! cargo run --example polar_fourier -- [image]
//! ```
//! The descriptors of the leaf and of the same leaf rotated by 90° are printed
//! side by side.

use leafid::imaging::{load_image, segment_leaf, to_grayscale, BinaryMask};
use leafid::pft::{pft_from_mask, DEFAULT_ANGULAR_SAMPLES, DEFAULT_RADIAL_SAMPLES, MAX_ANGULAR_FREQ};
use leafid::synth::{sample_rng, SynthSpecies};

fn rotate90(m: &BinaryMask) -> BinaryMask {
    let h = m.height();
    BinaryMask::from_fn(h, m.width(), |x, y| m.get(y, h - 1 - x))
}

fn main() -> leafid::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(p) => load_image(p)?,
        None => SynthSpecies::nth(2).render(160, &mut sample_rng(7, 2, 0)),
    };
    let mask = segment_leaf(&to_grayscale(&img))?;
    let a = pft_from_mask(&mask, DEFAULT_RADIAL_SAMPLES, DEFAULT_ANGULAR_SAMPLES)?;
    let b = pft_from_mask(&rotate90(&mask), DEFAULT_RADIAL_SAMPLES, DEFAULT_ANGULAR_SAMPLES)?;

    println!("rho phi   original    rotated");
    for (i, (x, y)) in a.values.iter().zip(&b.values).enumerate() {
        let (rho, phi) = (i / (MAX_ANGULAR_FREQ + 1), i % (MAX_ANGULAR_FREQ + 1));
        println!("{rho:>3} {phi:>3}  {x:>9.6}  {y:>9.6}");
    }
    let worst = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("largest difference {worst:.2e}");
    Ok(())
}
