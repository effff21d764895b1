//! The full 88-value feature vector, group by group, and its projections onto
//! the ablation rows.
//!
//! ```text
//! cargo run --example feature_vector -- [image]
//! ```

use leafid::features::{extract_all, extract_file, project, ExtractionParams, FeatureGroup, FeatureSetSpec};
use leafid::synth::{sample_rng, SynthSpecies};

fn main() -> leafid::Result<()> {
    let params = ExtractionParams::default();
    let v = match std::env::args().nth(1) {
        Some(p) => extract_file(p, &params)?,
        None => extract_all(&SynthSpecies::nth(6).render(160, &mut sample_rng(7, 6, 0)), &params)?,
    };
    for g in FeatureGroup::ALL {
        let vals: Vec<String> = v.group(g).iter().map(|x| format!("{x:.4}")).collect();
        println!("{:<11} [{:>2}] {}", g.name(), g.len(), vals.join(" "));
    }
    println!();
    for row in 1..=10 {
        let spec = FeatureSetSpec::ablation_row(row)?;
        println!("row {row:>2}: {:>2} dims  {spec}", project(&v, &spec).len());
    }
    Ok(())
}
