//! Feature-group ablation on a dataset: one model per row of the feature table.
//!
//! ```text
//! cargo run --release --example ablation -- [dataset-root refs tests]
//! ```
//! Without arguments a small synthetic dataset is generated in a temporary
//! directory. A dataset root holds one subdirectory of images per species.

use leafid::classifier::FitOptions;
use leafid::features::ExtractionParams;
use leafid::harness::{build_manifest, run_ablation, ManifestLayout, NamedSpec, SplitPlan};
use leafid::synth::write_dataset;

fn main() -> leafid::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let tmp = std::env::temp_dir().join(format!("leafid-ablation-{}", std::process::id()));
    let (manifest, plan) = match args.as_slice() {
        [root, refs, tests] => {
            let n = |s: &str| s.parse().map_err(|_| leafid::LeafError::InvalidInput(format!("bad count `{s}`")));
            (build_manifest(root, ManifestLayout::ClassSubdirs)?, SplitPlan::new(n(refs)?, n(tests)?))
        }
        _ => (write_dataset(&tmp, 6, 10, 112, 21)?, SplitPlan::new(7, 3)),
    };
    println!("{} images of {} species", manifest.len(), manifest.classes.len());
    let report = run_ablation(
        &manifest,
        &plan,
        &NamedSpec::ablation_rows(),
        &ExtractionParams::default(),
        FitOptions::default(),
        None,
    )?;
    print!("{}", report.to_text_table());
    let _ = std::fs::remove_dir_all(&tmp);
    Ok(())
}
