//! Dataset manifests, reference/test splits, evaluation and ablation runs.

mod ablation;
mod evaluate;
mod manifest;
mod split;

pub use ablation::{
    ablation_on_cache, extract_manifest, parse_spec_list, run_ablation, split_cache, with_jobs, AblationReport,
    AblationRun, NamedSpec,
};
pub use evaluate::{confusion_matrix, evaluate, EvaluationReport};
pub use manifest::{
    build_manifest, flavia_range_table, parse_range_table, DatasetKind, DatasetManifest, ManifestEntry, ManifestLayout,
    SpeciesRange,
};
pub use split::{split, split_items, Split, SplitPlan, SplitRule};
