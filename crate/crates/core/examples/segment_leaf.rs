//! Segments a leaf photograph and writes its mask.
//!
//! ```text
//! cargo run --example segment_leaf -- [image] [out.png]
//! ```
//! Without an image a synthetic leaf is rendered.

use leafid::imaging::{
    centroid, count_components, extract_contour, histogram, load_image, otsu_threshold, radial_signature, segment_leaf,
    to_grayscale, DEFAULT_SIGNATURE_SAMPLES,
};
use leafid::synth::{sample_rng, SynthSpecies};

fn main() -> leafid::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let img = match args.first() {
        Some(p) => load_image(p)?,
        None => SynthSpecies::nth(1).render(160, &mut sample_rng(7, 1, 0)),
    };
    let gray = to_grayscale(&img);
    let t = otsu_threshold(&histogram(gray.as_raw().iter().copied()));
    let mask = segment_leaf(&gray)?;
    println!("{}x{} image, Otsu threshold {t:?}", img.width(), img.height());
    println!("leaf area {} px in {} component(s)", mask.count(), count_components(&mask));

    let contour = extract_contour(&mask)?;
    let c = centroid(&mask)?;
    let sig = radial_signature(&contour, c, DEFAULT_SIGNATURE_SAMPLES)?;
    println!("contour: {} points, perimeter {:.2}", contour.len(), contour.perimeter());
    println!("centroid ({:.2}, {:.2}), mean radius {:.2}", c.x, c.y, sig.mean());

    let out = args.get(1).map(String::as_str).unwrap_or("leaf-mask.png");
    mask.save_png(out)?;
    println!("mask written to {out}");
    Ok(())
}
