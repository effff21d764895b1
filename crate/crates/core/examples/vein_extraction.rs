//! Vein layers from morphological top-hats at four disk radii.
//!
//! ```text
//! cargo run --example vein_extraction -- [image] [out-dir] [bright|dark]
//! ```
//! Writes `vein-r1.png` .. `vein-r4.png` to the output directory (default `.`).

use std::path::PathBuf;

use leafid::imaging::{load_image, segment_leaf, to_grayscale};
use leafid::synth::{sample_rng, SynthSpecies};
use leafid::vein::{vein_features, vein_layers, VeinPolarity};

fn main() -> leafid::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let img = match args.first().filter(|a| a.as_str() != "-") {
        Some(p) => load_image(p)?,
        None => SynthSpecies::nth(5).render(192, &mut sample_rng(7, 5, 0)),
    };
    let out = PathBuf::from(args.get(1).map(String::as_str).unwrap_or("."));
    let polarity: VeinPolarity = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(VeinPolarity::Bright);

    let gray = to_grayscale(&img);
    let mask = segment_leaf(&gray)?;
    let features = vein_features(&gray, &mask, polarity)?;
    println!("leaf area {} px, {polarity} veins", features.area);
    for layer in vein_layers(&gray, &mask, polarity)? {
        let k = layer.radius;
        let path = out.join(format!("vein-r{k}.png"));
        layer.veins.save_png(&path)?;
        println!(
            "radius {k}: {:>6} vein px, ratio {:.4} -> {}",
            features.counts[k - 1],
            features.ratios[k - 1],
            path.display()
        );
    }
    Ok(())
}
