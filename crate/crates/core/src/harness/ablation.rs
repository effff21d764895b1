use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluate::{evaluate, EvaluationReport};
use super::manifest::DatasetManifest;
use super::split::{split_items, SplitPlan};
use crate::classifier::{FitOptions, TrainedModel};
use crate::error::{LeafError, Result};
use crate::features::{extract_file, ExtractionParams, FeatureCache, FeatureSetSpec, FeatureVector};

/// A feature set with a display name, e.g. one row of an ablation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedSpec {
    pub name: String,
    pub spec: FeatureSetSpec,
}

impl NamedSpec {
    pub fn new(name: impl Into<String>, spec: FeatureSetSpec) -> Self {
        NamedSpec { name: name.into(), spec }
    }

    /// Rows 1 to 10 of the ablation table.
    pub fn ablation_rows() -> Vec<NamedSpec> {
        (1..=10)
            .map(|r| NamedSpec::new(format!("row {r}"), FeatureSetSpec::ablation_row(r).expect("valid row")))
            .collect()
    }
}

/// One spec per line, either `groups` or `name = groups`, where `groups` is a
/// `+`-joined list such as `pft+hull` or a table row such as `row 10`. Blank
/// lines and `#` comments are skipped.
pub fn parse_spec_list(text: &str) -> Result<Vec<NamedSpec>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, groups) = match line.split_once('=') {
            Some((n, g)) => (n.trim().to_string(), g.trim()),
            None => (line.to_string(), line),
        };
        let spec = groups.parse().map_err(|e| LeafError::Config(format!("spec line {}: {e}", i + 1)))?;
        out.push(NamedSpec { name, spec });
    }
    if out.is_empty() {
        return Err(LeafError::Config("spec list is empty".into()));
    }
    Ok(out)
}

/// Runs `f` on a pool of `jobs` threads, or on rayon's default pool size.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| LeafError::Config(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Extracts every image of the manifest in parallel. Rows keep manifest order,
/// carry their labels, and record paths relative to the manifest root.
pub fn extract_manifest(
    manifest: &DatasetManifest,
    params: &ExtractionParams,
    jobs: Option<usize>,
) -> Result<FeatureCache> {
    params.validate()?;
    let results: Vec<Result<FeatureVector>> = with_jobs(jobs, || {
        manifest
            .entries
            .par_iter()
            .map(|e| {
                extract_file(manifest.absolute(e), params).map(|v| v.with_label(Some(e.label)).with_source(&e.path))
            })
            .collect()
    })?;
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(FeatureCache { params: *params, classes: manifest.classes.clone(), rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRun {
    pub name: String,
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub plan: SplitPlan,
    pub params: ExtractionParams,
    pub ridge_factor: f64,
    pub runs: Vec<AblationRun>,
}

/// Reference and test rows of a labelled cache under `plan`.
pub fn split_cache(cache: &FeatureCache, plan: &SplitPlan) -> Result<(Vec<FeatureVector>, Vec<FeatureVector>)> {
    let paths: Vec<&std::path::Path> = cache.rows.iter().map(|r| r.source.as_path()).collect();
    let labels = cache
        .rows
        .iter()
        .map(|r| r.label.ok_or_else(|| LeafError::Split(format!("{} has no label", r.source.display()))))
        .collect::<Result<Vec<_>>>()?;
    let s = split_items(&paths, &labels, &cache.classes, plan)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| cache.rows[i].clone()).collect();
    Ok((pick(&s.references), pick(&s.tests)))
}

/// Trains and evaluates every spec on one split of already extracted features.
pub fn ablation_on_cache(
    cache: &FeatureCache,
    plan: &SplitPlan,
    specs: &[NamedSpec],
    fit: FitOptions,
) -> Result<AblationReport> {
    let (refs, tests) = split_cache(cache, plan)?;
    let runs = specs
        .iter()
        .map(|s| {
            let wrap = |e: LeafError| LeafError::Spec { spec: s.name.clone(), source: Box::new(e) };
            let model =
                TrainedModel::fit(&refs, cache.classes.clone(), s.spec.clone(), cache.params, fit).map_err(wrap)?;
            let report = EvaluationReport { plan: Some(*plan), ..evaluate(&model, &tests).map_err(wrap)? };
            Ok(AblationRun { name: s.name.clone(), report })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AblationReport { plan: *plan, params: cache.params, ridge_factor: fit.ridge_factor, runs })
}

/// Extracts features once, then trains and evaluates one model per spec.
pub fn run_ablation(
    manifest: &DatasetManifest,
    plan: &SplitPlan,
    specs: &[NamedSpec],
    params: &ExtractionParams,
    fit: FitOptions,
    jobs: Option<usize>,
) -> Result<AblationReport> {
    let cache = extract_manifest(manifest, params, jobs)?;
    ablation_on_cache(&cache, plan, specs, fit)
}

impl AblationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serialisable")
    }

    /// One line per spec: name, groups, dimension and accuracy.
    pub fn to_text_table(&self) -> String {
        let name_w = self.runs.iter().map(|r| r.name.len()).max().unwrap_or(0).max(4);
        let spec_w = self.runs.iter().map(|r| r.report.spec.to_string().len()).max().unwrap_or(0).max(8);
        let mut out = format!("{:<name_w$}  {:<spec_w$}  {:>4}  {:>9}\n", "name", "features", "dims", "accuracy");
        for r in &self.runs {
            out.push_str(&format!(
                "{:<name_w$}  {:<spec_w$}  {:>4}  {:>8.2}%\n",
                r.name,
                r.report.spec.to_string(),
                r.report.dim,
                100.0 * r.report.accuracy
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_list() {
        let specs = parse_spec_list("# table\nrow 1\nshape = pft+hull # with hull\n\nrow 10\n").unwrap();
        assert_eq!(specs.len(), 3);
        assert_eq!(specs[0].name, "row 1");
        assert_eq!(specs[1].name, "shape");
        assert_eq!(specs[1].spec.dim(), 37);
        assert_eq!(specs[2].spec.dim(), 85);
        assert!(parse_spec_list("# nothing\n").is_err());
        assert!(parse_spec_list("pft+nope").is_err());
    }

    #[test]
    fn table_rows_named() {
        let t = NamedSpec::ablation_rows();
        assert_eq!(t.len(), 10);
        assert_eq!(t[7].spec.dim(), 82);
        assert_eq!(t[9].spec.dim(), 85);
    }
}
