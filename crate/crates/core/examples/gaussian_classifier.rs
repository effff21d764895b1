//! Fits the Gaussian classifier on synthetic leaves and classifies held-out ones.
//!
//! ```text
//! cargo run --release --example gaussian_classifier
//! ```

use leafid::classifier::{FitOptions, TrainedModel};
use leafid::features::{extract_all, ExtractionParams, FeatureSetSpec};
use leafid::synth::{sample_rng, species_name, SynthSpecies};

const CLASSES: usize = 5;
const TRAIN: usize = 8;
const TEST: usize = 3;

fn main() -> leafid::Result<()> {
    let params = ExtractionParams::default();
    let mut train = Vec::new();
    let mut test = Vec::new();
    for k in 0..CLASSES {
        let species = SynthSpecies::nth(k);
        for i in 0..TRAIN + TEST {
            let v = extract_all(&species.render(128, &mut sample_rng(11, k, i)), &params)?.with_label(Some(k));
            if i < TRAIN {
                train.push(v)
            } else {
                test.push(v)
            }
        }
    }
    let classes = (0..CLASSES).map(species_name).collect();
    let spec = FeatureSetSpec::ablation_row(4)?;
    let model = TrainedModel::fit(&train, classes, spec, params, FitOptions::default())?;
    println!("{} species, {} dims, ridge lambda {:.3e}", model.classes.len(), model.model.dim(), model.model.lambda());

    let mut correct = 0;
    for v in &test {
        let post = model.posterior(v)?;
        let (best, p) = post.top_k(1)[0];
        correct += usize::from(Some(best) == v.label);
        println!("{} -> {} (p = {p:.3})", model.classes[v.label.unwrap()], model.classes[best]);
    }
    println!("{correct}/{} correct", test.len());
    Ok(())
}
