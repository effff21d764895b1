//! Hull, Shen moment and auxiliary shape descriptors of one leaf.
//!
//! ```text
//! cargo run --example shape_descriptors -- [image]
//! ```

use leafid::imaging::{
    centroid, extract_contour, load_image, radial_signature, segment_leaf, to_grayscale, DEFAULT_SIGNATURE_SAMPLES,
};
use leafid::shape::{aux_shape_features, hull_features, shen_features};
use leafid::synth::{sample_rng, SynthSpecies};

fn main() -> leafid::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(p) => load_image(p)?,
        None => SynthSpecies::nth(3).render(160, &mut sample_rng(7, 3, 0)),
    };
    let mask = segment_leaf(&to_grayscale(&img))?;
    let contour = extract_contour(&mask)?;
    let sig = radial_signature(&contour, centroid(&mask)?, DEFAULT_SIGNATURE_SAMPLES)?;

    let hull = hull_features(&mask, &contour)?;
    println!("convex hull: {} vertices", hull.hull_vertices.len());
    println!("  solidity  {:.4}", hull.solidity);
    println!("  convexity {:.4}", hull.convexity);

    let shen = shen_features(&sig)?;
    println!("Shen moments of the radial signature:");
    println!("  f1 {:.5}  f2 {:.5}  f3 {:.5}  mf {:.5}", shen.f1, shen.f2, shen.f3, shen.mf);

    let aux = aux_shape_features(&mask, &contour, &sig)?;
    println!("eccentricity {:.4}, roundness {:.4}, dispersion {:.4}", aux.eccentricity, aux.roundness, aux.dispersion);
    Ok(())
}
