use serde::{Deserialize, Serialize};

use super::split::SplitPlan;
use crate::classifier::{ClassModel, TrainedModel};
use crate::error::{LeafError, Result};
use crate::features::{project, ExtractionParams, FeatureSetSpec, FeatureVector};

/// Recognition results on a labelled test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub spec: FeatureSetSpec,
    pub dim: usize,
    pub classes: Vec<String>,
    /// Correctly recognised test leaves.
    pub n_r: usize,
    /// Tested leaves.
    pub n_t: usize,
    /// `n_r / n_t`
    pub accuracy: f64,
    /// `confusion[true][predicted]`
    pub confusion: Vec<Vec<usize>>,
    /// `None` for classes without test leaves.
    pub per_class_accuracy: Vec<Option<f64>>,
    pub params: ExtractionParams,
    pub ridge_factor: f64,
    pub lambda: f64,
    /// Split that produced the test set, when known.
    #[serde(default)]
    pub plan: Option<SplitPlan>,
}

/// Counts of an already projected test set.
pub fn confusion_matrix<S: AsRef<[f64]>>(model: &ClassModel, xs: &[S], labels: &[usize]) -> Result<Vec<Vec<usize>>> {
    let c = model.n_classes();
    let mut confusion = vec![vec![0usize; c]; c];
    for (x, &l) in xs.iter().zip(labels) {
        if l >= c {
            return Err(LeafError::Classifier(format!("test label {l} is outside the model's {c} classes")));
        }
        confusion[l][model.classify(x.as_ref())?] += 1;
    }
    Ok(confusion)
}

pub fn evaluate(model: &TrainedModel, rows: &[FeatureVector]) -> Result<EvaluationReport> {
    if rows.is_empty() {
        return Err(LeafError::Classifier("empty test set".into()));
    }
    let mut xs = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    for r in rows {
        labels.push(
            r.label.ok_or_else(|| LeafError::Classifier(format!("test leaf {} has no label", r.source.display())))?,
        );
        xs.push(project(r, &model.spec));
    }
    let confusion = confusion_matrix(&model.model, &xs, &labels)?;
    let n_t = rows.len();
    let n_r: usize = (0..confusion.len()).map(|i| confusion[i][i]).sum();
    let per_class_accuracy = confusion
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let total: usize = row.iter().sum();
            (total > 0).then(|| row[i] as f64 / total as f64)
        })
        .collect();
    Ok(EvaluationReport {
        spec: model.spec.clone(),
        dim: model.spec.dim(),
        classes: model.classes.clone(),
        n_r,
        n_t,
        accuracy: n_r as f64 / n_t as f64,
        confusion,
        per_class_accuracy,
        params: model.params,
        ridge_factor: model.ridge_factor,
        lambda: model.model.lambda(),
        plan: None,
    })
}

impl EvaluationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serialisable")
    }

    /// Aligned per-class accuracy and the confusion matrix.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "feature set: {} ({} dims)\naccuracy: {}/{} = {:.2}%\n\n",
            self.spec,
            self.dim,
            self.n_r,
            self.n_t,
            100.0 * self.accuracy
        );
        let width = self.classes.iter().map(|c| c.len()).max().unwrap_or(0).max(7);
        out.push_str(&format!("{:<width$}  {:>8}\n", "species", "accuracy"));
        for (name, acc) in self.classes.iter().zip(&self.per_class_accuracy) {
            let acc = acc.map_or_else(|| "-".to_string(), |a| format!("{:.2}%", 100.0 * a));
            out.push_str(&format!("{name:<width$}  {acc:>8}\n"));
        }
        out.push_str("\nconfusion (rows: true, columns: predicted)\n");
        for row in &self.confusion {
            let cells: Vec<String> = row.iter().map(|n| format!("{n:>3}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}
