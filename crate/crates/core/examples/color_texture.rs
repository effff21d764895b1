//! Colour moments, co-occurrence texture and lacunarity of a leaf.
//!
//! ```text
//! cargo run --example color_texture -- [image]
//! ```

use leafid::color::color_moments;
use leafid::imaging::{load_image, segment_leaf, to_grayscale};
use leafid::synth::{sample_rng, SynthSpecies};
use leafid::texture::{compute_glcm, haralick_features, lacunarity_features, GlcmDirection, DEFAULT_GLCM_LEVELS};

const CHANNELS: [&str; 4] = ["R", "G", "B", "gray"];

fn main() -> leafid::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(p) => load_image(p)?,
        None => SynthSpecies::nth(4).render(160, &mut sample_rng(7, 4, 0)),
    };
    let gray = to_grayscale(&img);
    let mask = segment_leaf(&gray)?;

    println!("channel      mean      std     skew     kurt");
    for (name, m) in CHANNELS.iter().zip(color_moments(&img, &gray, &mask)?.channels) {
        println!("{name:<5} {:>10.3} {:>8.3} {:>8.3} {:>8.3}", m.mean, m.std, m.skew, m.kurt);
    }

    println!("\nGLCM ({DEFAULT_GLCM_LEVELS} levels)     ASM  contrast      IDM  entropy     corr");
    for dir in GlcmDirection::ALL {
        let h = haralick_features(&compute_glcm(&gray, &mask, DEFAULT_GLCM_LEVELS, dir)?);
        println!(
            "{:<18} {:>8.4} {:>9.4} {:>8.4} {:>8.4} {:>8.4}",
            format!("{dir:?}"),
            h.asm,
            h.contrast,
            h.idm,
            h.entropy,
            h.correlation
        );
    }

    println!("\nlacunarity        Ls       La       L2       L4       L6");
    for (name, l) in CHANNELS.iter().zip(lacunarity_features(&img, &gray, &mask)?.channels) {
        println!("{name:<10} {:>8.5} {:>8.5} {:>8.5} {:>8.5} {:>8.5}", l.ls, l.la, l.l2, l.l4, l.l6);
    }
    Ok(())
}
