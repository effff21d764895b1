use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::manifest::DatasetManifest;
use crate::error::{LeafError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitRule {
    /// Sort each class by file name; the first images are references, the next
    /// ones tests.
    SortedName,
    /// Shuffle each class with a seeded generator.
    Seeded,
}

impl FromStr for SplitRule {
    type Err = LeafError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sorted-name" | "sorted" => Ok(SplitRule::SortedName),
            "seeded" | "seeded-random" | "random" => Ok(SplitRule::Seeded),
            other => Err(LeafError::Config(format!("unknown split rule `{other}`"))),
        }
    }
}

impl fmt::Display for SplitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitRule::SortedName => "sorted-name",
            SplitRule::Seeded => "seeded",
        })
    }
}

/// Per-class reference and test quotas. Images beyond the quotas are unused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub reference: usize,
    pub test: usize,
    pub rule: SplitRule,
    pub seed: u64,
}

impl SplitPlan {
    pub fn new(reference: usize, test: usize) -> Self {
        SplitPlan { reference, test, rule: SplitRule::SortedName, seed: 0 }
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.rule = SplitRule::Seeded;
        self.seed = seed;
        self
    }

    /// 30 references and 10 tests per species.
    pub fn flavia() -> Self {
        SplitPlan::new(30, 10)
    }

    /// 90 references and 20 tests per species.
    pub fn foliage() -> Self {
        SplitPlan::new(90, 20)
    }
}

/// Indices into the split items, grouped by class in label order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub references: Vec<usize>,
    pub tests: Vec<usize>,
}

/// Splits labelled items. `classes` only names classes in error messages.
pub fn split_items<P: AsRef<Path>>(
    paths: &[P],
    labels: &[usize],
    classes: &[String],
    plan: &SplitPlan,
) -> Result<Split> {
    if paths.len() != labels.len() {
        return Err(LeafError::Split("one label per item required".into()));
    }
    if plan.reference == 0 || plan.test == 0 {
        return Err(LeafError::Split("reference and test counts must be positive".into()));
    }
    let c = labels.iter().max().map_or(0, |&m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); c];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    let mut out = Split { references: Vec::new(), tests: Vec::new() };
    for (label, mut idx) in members.into_iter().enumerate() {
        let name = classes.get(label).map_or_else(|| format!("class {label}"), |s| format!("`{s}`"));
        if idx.len() < plan.reference + plan.test {
            return Err(LeafError::Split(format!(
                "{name} has {} images, the plan needs {} + {}",
                idx.len(),
                plan.reference,
                plan.test
            )));
        }
        let key = |i: &usize| {
            let p = paths[*i].as_ref();
            (p.file_name().map(|n| n.to_os_string()), p.to_path_buf())
        };
        idx.sort_by_key(key);
        if plan.rule == SplitRule::Seeded {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            rng.set_stream(label as u64);
            idx.shuffle(&mut rng);
        }
        out.references.extend_from_slice(&idx[..plan.reference]);
        out.tests.extend_from_slice(&idx[plan.reference..plan.reference + plan.test]);
    }
    Ok(out)
}

/// Splits a manifest; indices refer to `manifest.entries`.
pub fn split(manifest: &DatasetManifest, plan: &SplitPlan) -> Result<Split> {
    let paths: Vec<&Path> = manifest.entries.iter().map(|e| e.path.as_path()).collect();
    let labels: Vec<usize> = manifest.entries.iter().map(|e| e.label).collect();
    split_items(&paths, &labels, &manifest.classes, plan)
}
