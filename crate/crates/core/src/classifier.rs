//! Gaussian Bayes classifier with a covariance matrix shared by all classes.
//!
//! Features are standardised with the training mean and standard deviation, the
//! class means and the pooled within-class covariance are estimated on the
//! standardised data, and posteriors are normalised in the log domain.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{LeafError, Result};
use crate::features::{layout_string, project, ExtractionParams, FeatureSetSpec, FeatureVector};

/// Default ridge, relative to the mean pooled variance.
pub const DEFAULT_RIDGE_FACTOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// `λ = ridge_factor · trace(S) / d` is added to the diagonal of `S`.
    pub ridge_factor: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { ridge_factor: DEFAULT_RIDGE_FACTOR }
    }
}

#[derive(Debug, Clone)]
pub struct ClassModel {
    shift: Vec<f64>,
    scale: Vec<f64>,
    means: Vec<DVector<f64>>,
    pooled: DMatrix<f64>,
    priors: Vec<f64>,
    lambda: f64,
    chol: Cholesky<f64, Dyn>,
}

/// Class probabilities of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    pub probs: Vec<f64>,
}

impl Posterior {
    /// Most probable class; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// The `k` most probable classes, most probable first, ties by index.
    pub fn top_k(&self, k: usize) -> Vec<(usize, f64)> {
        let mut ranked: Vec<(usize, f64)> = self.probs.iter().copied().enumerate().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked.truncate(k);
        ranked
    }
}

fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(LeafError::Classifier(format!("feature {i} is not finite"))),
        None => Ok(()),
    }
}

impl ClassModel {
    /// Fits the model to `samples` with dense labels `0..c`.
    pub fn fit<S: AsRef<[f64]>>(samples: &[S], labels: &[usize], opts: FitOptions) -> Result<ClassModel> {
        if samples.len() != labels.len() {
            return Err(LeafError::Classifier("one label per sample required".into()));
        }
        let d = samples.first().map_or(0, |s| s.as_ref().len());
        if d == 0 {
            return Err(LeafError::Classifier("no samples or zero-dimensional features".into()));
        }
        for s in samples {
            if s.as_ref().len() != d {
                return Err(LeafError::Dimension { expected: d, got: s.as_ref().len() });
            }
            check_finite(s.as_ref())?;
        }
        if !(opts.ridge_factor >= 0.0 && opts.ridge_factor.is_finite()) {
            return Err(LeafError::Classifier("ridge factor must be finite and nonnegative".into()));
        }
        let c = labels.iter().max().map_or(0, |&m| m + 1);
        let mut counts = vec![0usize; c];
        for &l in labels {
            counts[l] += 1;
        }
        if c < 2 {
            return Err(LeafError::Classifier("at least two classes are required".into()));
        }
        if let Some(i) = counts.iter().position(|&n| n < 2) {
            return Err(LeafError::Classifier(format!("class {i} has {} samples, at least 2 are required", counts[i])));
        }
        let n = samples.len();

        let mut shift = vec![0.0; d];
        for s in samples {
            for (a, v) in shift.iter_mut().zip(s.as_ref()) {
                *a += v;
            }
        }
        shift.iter_mut().for_each(|a| *a /= n as f64);
        let mut scale = vec![0.0; d];
        for s in samples {
            for ((a, v), m) in scale.iter_mut().zip(s.as_ref()).zip(&shift) {
                *a += (v - m) * (v - m);
            }
        }
        for a in scale.iter_mut() {
            let sd = (*a / n as f64).sqrt();
            *a = if sd > 0.0 { sd } else { 1.0 };
        }

        let z: Vec<DVector<f64>> = samples
            .iter()
            .map(|s| {
                DVector::from_iterator(d, s.as_ref().iter().zip(&shift).zip(&scale).map(|((v, m), k)| (v - m) / k))
            })
            .collect();
        let mut means = vec![DVector::zeros(d); c];
        for (zi, &l) in z.iter().zip(labels) {
            means[l] += zi;
        }
        for (m, &k) in means.iter_mut().zip(&counts) {
            *m /= k as f64;
        }
        let mut pooled = DMatrix::zeros(d, d);
        for (zi, &l) in z.iter().zip(labels) {
            let e = zi - &means[l];
            pooled.ger(1.0, &e, &e, 1.0);
        }
        pooled /= (n - c) as f64;
        let lambda = opts.ridge_factor * pooled.trace() / d as f64;
        ClassModel::from_parts(shift, scale, means, pooled, vec![1.0 / c as f64; c], lambda)
    }

    /// Assembles a model from its parameters, factorising `pooled + λI`.
    pub fn from_parts(
        shift: Vec<f64>,
        scale: Vec<f64>,
        means: Vec<DVector<f64>>,
        pooled: DMatrix<f64>,
        priors: Vec<f64>,
        lambda: f64,
    ) -> Result<ClassModel> {
        let d = shift.len();
        let c = means.len();
        if scale.len() != d || pooled.shape() != (d, d) || means.iter().any(|m| m.len() != d) || priors.len() != c {
            return Err(LeafError::Model("inconsistent parameter shapes".into()));
        }
        if scale.iter().any(|&s| !(s > 0.0)) {
            return Err(LeafError::Model("feature scales must be positive".into()));
        }
        if priors.iter().any(|&p| !(p >= 0.0)) || (priors.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(LeafError::Model("priors must be nonnegative and sum to 1".into()));
        }
        let mut reg = pooled.clone();
        for i in 0..d {
            reg[(i, i)] += lambda;
        }
        let chol = Cholesky::new(reg)
            .ok_or_else(|| LeafError::Classifier("pooled covariance is not positive definite".into()))?;
        Ok(ClassModel { shift, scale, means, pooled, priors, lambda, chol })
    }

    pub fn n_classes(&self) -> usize {
        self.means.len()
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// Standardisation offsets (training means).
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    /// Standardisation scales (training standard deviations, 1 where constant).
    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    /// Class means in standardised units.
    pub fn means(&self) -> &[DVector<f64>] {
        &self.means
    }

    /// Pooled covariance in standardised units, without the ridge.
    pub fn pooled(&self) -> &DMatrix<f64> {
        &self.pooled
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn standardize(&self, x: &[f64]) -> Result<DVector<f64>> {
        if x.len() != self.dim() {
            return Err(LeafError::Dimension { expected: self.dim(), got: x.len() });
        }
        check_finite(x)?;
        Ok(DVector::from_iterator(x.len(), x.iter().zip(&self.shift).zip(&self.scale).map(|((v, m), k)| (v - m) / k)))
    }

    /// `log p(x|ω_i) + log P(ω_i)` up to a constant shared by all classes.
    pub fn log_scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        let z = self.standardize(x)?;
        Ok(self
            .means
            .iter()
            .zip(&self.priors)
            .map(|(m, &p)| {
                let y = self.chol.l().solve_lower_triangular(&(&z - m)).expect("Cholesky factor is invertible");
                -0.5 * y.norm_squared() + p.ln()
            })
            .collect())
    }

    pub fn posterior(&self, x: &[f64]) -> Result<Posterior> {
        let scores = self.log_scores(x)?;
        let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
        let total: f64 = exp.iter().sum();
        Ok(Posterior { probs: exp.into_iter().map(|e| e / total).collect() })
    }

    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        Ok(self.posterior(x)?.argmax())
    }
}

/// A fitted classifier together with the feature selection and extraction
/// parameters it expects, and the species names of its classes.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub model: ClassModel,
    pub spec: FeatureSetSpec,
    pub params: ExtractionParams,
    pub classes: Vec<String>,
    pub ridge_factor: f64,
}

impl TrainedModel {
    /// Fits on the labelled rows, projected onto `spec`.
    pub fn fit(
        rows: &[FeatureVector],
        classes: Vec<String>,
        spec: FeatureSetSpec,
        params: ExtractionParams,
        opts: FitOptions,
    ) -> Result<TrainedModel> {
        let mut xs = Vec::with_capacity(rows.len());
        let mut labels = Vec::with_capacity(rows.len());
        for r in rows {
            let l = r.label.ok_or_else(|| LeafError::Classifier(format!("{} has no label", r.source.display())))?;
            xs.push(project(r, &spec));
            labels.push(l);
        }
        let model = ClassModel::fit(&xs, &labels, opts)?;
        if model.n_classes() > classes.len() {
            return Err(LeafError::Classifier("more labels than class names".into()));
        }
        // classes without training rows cannot be predicted; keep names aligned with labels
        let classes = classes.into_iter().take(model.n_classes()).collect();
        Ok(TrainedModel { model, spec, params, classes, ridge_factor: opts.ridge_factor })
    }

    pub fn posterior(&self, v: &FeatureVector) -> Result<Posterior> {
        self.model.posterior(&project(v, &self.spec))
    }

    pub fn classify(&self, v: &FeatureVector) -> Result<usize> {
        Ok(self.posterior(v)?.argmax())
    }
}

pub const MODEL_FORMAT: &str = "leafid-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ModelHeader {
    format: String,
    version: u32,
    layout: String,
    spec: FeatureSetSpec,
    params: ExtractionParams,
    classes: Vec<String>,
    dim: usize,
    ridge_factor: f64,
    lambda: f64,
}

fn write_row(out: &mut impl Write, tag: &str, values: impl IntoIterator<Item = f64>) -> Result<()> {
    let v: Vec<String> = values.into_iter().map(|x| x.to_string()).collect();
    writeln!(out, "{tag}\t{}", v.join(","))?;
    Ok(())
}

/// JSON header line, then tagged rows of shortest round-trip decimals:
/// `shift`, `scale`, `prior`, one `mean` per class and one `cov` per dimension.
pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    let m = &model.model;
    let header = ModelHeader {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        layout: layout_string(),
        spec: model.spec.clone(),
        params: model.params,
        classes: model.classes.clone(),
        dim: m.dim(),
        ridge_factor: model.ridge_factor,
        lambda: m.lambda,
    };
    let mut out = BufWriter::new(std::fs::File::create(path.as_ref())?);
    writeln!(out, "{}", serde_json::to_string(&header).map_err(|e| LeafError::Model(e.to_string()))?)?;
    write_row(&mut out, "shift", m.shift.iter().copied())?;
    write_row(&mut out, "scale", m.scale.iter().copied())?;
    write_row(&mut out, "prior", m.priors.iter().copied())?;
    for mean in &m.means {
        write_row(&mut out, "mean", mean.iter().copied())?;
    }
    for r in 0..m.dim() {
        write_row(&mut out, "cov", m.pooled.row(r).iter().copied())?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let err = |msg: String| LeafError::Model(format!("{}: {msg}", path.display()));
    let mut lines = BufReader::new(std::fs::File::open(path)?).lines();
    let first = lines.next().ok_or_else(|| err("empty file".into()))??;
    let header: ModelHeader = serde_json::from_str(&first).map_err(|e| err(format!("bad header: {e}")))?;
    if header.format != MODEL_FORMAT {
        return Err(err(format!("not a model file (format `{}`)", header.format)));
    }
    if header.version != MODEL_VERSION {
        return Err(err(format!("unsupported model version {}", header.version)));
    }
    if header.layout != layout_string() {
        return Err(err(format!("feature layout `{}` differs from `{}`", header.layout, layout_string())));
    }
    if header.spec.dim() != header.dim {
        return Err(err(format!("spec `{}` has {} dims, header says {}", header.spec, header.spec.dim(), header.dim)));
    }
    let (d, c) = (header.dim, header.classes.len());
    let mut next = |tag: &str, len: usize| -> Result<Vec<f64>> {
        let line = lines.next().ok_or_else(|| err(format!("missing `{tag}` row")))??;
        let (t, body) = line.split_once('\t').ok_or_else(|| err(format!("malformed `{tag}` row")))?;
        if t != tag {
            return Err(err(format!("expected `{tag}` row, found `{t}`")));
        }
        let v = body
            .split(',')
            .map(|s| s.parse::<f64>().map_err(|_| err(format!("bad number `{s}` in `{tag}` row"))))
            .collect::<Result<Vec<f64>>>()?;
        if v.len() != len {
            return Err(err(format!("`{tag}` row has {} values, expected {len}", v.len())));
        }
        Ok(v)
    };
    let shift = next("shift", d)?;
    let scale = next("scale", d)?;
    let priors = next("prior", c)?;
    let means = (0..c).map(|_| next("mean", d).map(DVector::from_vec)).collect::<Result<Vec<_>>>()?;
    let mut cov = Vec::with_capacity(d * d);
    for _ in 0..d {
        cov.extend(next("cov", d)?);
    }
    if lines.next().is_some() {
        return Err(err("trailing data".into()));
    }
    let model = ClassModel::from_parts(shift, scale, means, DMatrix::from_row_slice(d, d, &cov), priors, header.lambda)
        .map_err(|e| err(e.to_string()))?;
    Ok(TrainedModel {
        model,
        spec: header.spec,
        params: header.params,
        classes: header.classes,
        ridge_factor: header.ridge_factor,
    })
}
