//! Run configuration read from flat `key = value` files.
//!
//! Every field is optional so a file, environment and command-line flags can be
//! layered; [`RunConfig::overlay`] lets later layers win.

use std::path::Path;

use crate::classifier::DEFAULT_RIDGE_FACTOR;
use crate::error::{LeafError, Result};
use crate::features::{ExtractionParams, FeatureSetSpec};
use crate::harness::{ManifestLayout, SplitPlan, SplitRule};
use crate::vein::VeinPolarity;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub layout: Option<ManifestLayout>,
    pub spec: Option<FeatureSetSpec>,
    pub glcm_levels: Option<usize>,
    pub signature_samples: Option<usize>,
    pub polar_radial: Option<usize>,
    pub polar_angular: Option<usize>,
    pub vein_polarity: Option<VeinPolarity>,
    pub ridge_factor: Option<f64>,
    pub refs: Option<usize>,
    pub tests: Option<usize>,
    pub rule: Option<SplitRule>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub top_k: Option<usize>,
}

/// Keys accepted in config files.
pub const CONFIG_KEYS: [&str; 14] = [
    "layout",
    "spec",
    "glcm_levels",
    "signature_samples",
    "polar_radial",
    "polar_angular",
    "vein_polarity",
    "ridge_factor",
    "refs",
    "tests",
    "rule",
    "seed",
    "jobs",
    "top_k",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| LeafError::Config(format!("bad value `{value}` for `{key}`")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "layout" => self.layout = Some(v.parse()?),
            "spec" => self.spec = Some(v.parse()?),
            "glcm_levels" => self.glcm_levels = Some(parse(key, v)?),
            "signature_samples" => self.signature_samples = Some(parse(key, v)?),
            "polar_radial" => self.polar_radial = Some(parse(key, v)?),
            "polar_angular" => self.polar_angular = Some(parse(key, v)?),
            "vein_polarity" => self.vein_polarity = Some(v.parse()?),
            "ridge_factor" => self.ridge_factor = Some(parse(key, v)?),
            "refs" => self.refs = Some(parse(key, v)?),
            "tests" => self.tests = Some(parse(key, v)?),
            "rule" => self.rule = Some(v.parse()?),
            "seed" => self.seed = Some(parse(key, v)?),
            "jobs" => self.jobs = Some(parse(key, v)?),
            "top_k" => self.top_k = Some(parse(key, v)?),
            other => {
                return Err(LeafError::Config(format!("unknown key `{other}` (known: {})", CONFIG_KEYS.join(", "))))
            }
        }
        Ok(())
    }

    /// Parses `key = value` lines; blank lines and `#` comments are ignored.
    pub fn parse_str(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LeafError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            cfg.set(k, v).map_err(|e| LeafError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| LeafError::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse_str(&text)
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        RunConfig {
            layout: top.layout.or(self.layout),
            spec: top.spec.or(self.spec),
            glcm_levels: top.glcm_levels.or(self.glcm_levels),
            signature_samples: top.signature_samples.or(self.signature_samples),
            polar_radial: top.polar_radial.or(self.polar_radial),
            polar_angular: top.polar_angular.or(self.polar_angular),
            vein_polarity: top.vein_polarity.or(self.vein_polarity),
            ridge_factor: top.ridge_factor.or(self.ridge_factor),
            refs: top.refs.or(self.refs),
            tests: top.tests.or(self.tests),
            rule: top.rule.or(self.rule),
            seed: top.seed.or(self.seed),
            jobs: top.jobs.or(self.jobs),
            top_k: top.top_k.or(self.top_k),
        }
    }

    /// Whether any extraction parameter was set explicitly.
    pub fn has_extraction_overrides(&self) -> bool {
        self.glcm_levels.is_some()
            || self.signature_samples.is_some()
            || self.polar_radial.is_some()
            || self.polar_angular.is_some()
            || self.vein_polarity.is_some()
    }

    pub fn extraction_params(&self) -> Result<ExtractionParams> {
        let d = ExtractionParams::default();
        let p = ExtractionParams {
            glcm_levels: self.glcm_levels.unwrap_or(d.glcm_levels),
            signature_samples: self.signature_samples.unwrap_or(d.signature_samples),
            polar_radial: self.polar_radial.unwrap_or(d.polar_radial),
            polar_angular: self.polar_angular.unwrap_or(d.polar_angular),
            vein_polarity: self.vein_polarity.unwrap_or(d.vein_polarity),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn ridge_factor(&self) -> Result<f64> {
        let r = self.ridge_factor.unwrap_or(DEFAULT_RIDGE_FACTOR);
        if !(r >= 0.0 && r.is_finite()) {
            return Err(LeafError::Config("ridge_factor must be finite and nonnegative".into()));
        }
        Ok(r)
    }

    pub fn spec(&self) -> FeatureSetSpec {
        self.spec.clone().unwrap_or_else(FeatureSetSpec::full)
    }

    /// A split plan if reference or test counts are configured, using `fallback`
    /// for the missing one.
    pub fn split_plan(&self, fallback: Option<SplitPlan>) -> Option<SplitPlan> {
        let base = match (self.refs, self.tests, fallback) {
            (None, None, None) => return None,
            (r, t, f) => {
                let f = f.unwrap_or(SplitPlan::flavia());
                SplitPlan::new(r.unwrap_or(f.reference), t.unwrap_or(f.test))
            }
        };
        Some(SplitPlan { rule: self.rule.unwrap_or(base.rule), seed: self.seed.unwrap_or(base.seed), ..base })
    }
}
