//! Per-leaf feature assembly, group selection and the on-disk feature cache.

use std::fmt;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::{color_moments, COLOR_LEN};
use crate::error::{LeafError, Result};
use crate::imaging::{
    centroid, extract_contour, load_image, radial_signature, segment_leaf, to_grayscale, BinaryMask, GrayImage,
    ImageRgb, DEFAULT_SIGNATURE_SAMPLES,
};
use crate::pft::{pft_from_mask, DEFAULT_ANGULAR_SAMPLES, DEFAULT_RADIAL_SAMPLES, PFT_LEN};
use crate::shape::{aux_shape_features, hull_features, shen_features};
use crate::texture::{glcm_feature_vector, lacunarity_features, DEFAULT_GLCM_LEVELS, GLCM_LEN, LACUNARITY_LEN};
use crate::vein::{vein_layers, VeinLayer, VeinPolarity, VEIN_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureGroup {
    Pft,
    Hull,
    Color,
    Vein,
    Glcm,
    Lacunarity,
    Shen,
    AuxShape,
}

impl FeatureGroup {
    /// Canonical order of the groups inside a [`FeatureVector`].
    pub const ALL: [FeatureGroup; 8] = [
        FeatureGroup::Pft,
        FeatureGroup::Hull,
        FeatureGroup::Color,
        FeatureGroup::Vein,
        FeatureGroup::Glcm,
        FeatureGroup::Lacunarity,
        FeatureGroup::Shen,
        FeatureGroup::AuxShape,
    ];

    #[allow(clippy::len_without_is_empty)]
    pub const fn len(self) -> usize {
        match self {
            FeatureGroup::Pft => PFT_LEN,
            FeatureGroup::Hull => 2,
            FeatureGroup::Color => COLOR_LEN,
            FeatureGroup::Vein => VEIN_LEN,
            FeatureGroup::Glcm => GLCM_LEN,
            FeatureGroup::Lacunarity => LACUNARITY_LEN,
            FeatureGroup::Shen => 3,
            FeatureGroup::AuxShape => 3,
        }
    }

    /// Start of the group in a full vector.
    pub fn offset(self) -> usize {
        FeatureGroup::ALL.iter().take_while(|&&g| g != self).map(|g| g.len()).sum()
    }

    pub const fn name(self) -> &'static str {
        match self {
            FeatureGroup::Pft => "pft",
            FeatureGroup::Hull => "hull",
            FeatureGroup::Color => "color",
            FeatureGroup::Vein => "vein",
            FeatureGroup::Glcm => "glcm",
            FeatureGroup::Lacunarity => "lacunarity",
            FeatureGroup::Shen => "shen",
            FeatureGroup::AuxShape => "aux_shape",
        }
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureGroup {
    type Err = LeafError;
    fn from_str(s: &str) -> Result<Self> {
        FeatureGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .or(match s {
                "lac" => Some(FeatureGroup::Lacunarity),
                "aux" => Some(FeatureGroup::AuxShape),
                _ => None,
            })
            .ok_or_else(|| LeafError::Config(format!("unknown feature group `{s}`")))
    }
}

/// Length of a vector holding every group.
pub const FEATURE_LEN: usize = 88;

/// Layout string recorded in cache and model headers.
pub fn layout_string() -> String {
    FeatureGroup::ALL.iter().map(|g| format!("{}:{}", g.name(), g.len())).collect::<Vec<_>>().join(",")
}

/// All feature groups of one leaf in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
    pub label: Option<usize>,
    pub source: PathBuf,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, label: Option<usize>, source: impl Into<PathBuf>) -> Result<Self> {
        if values.len() != FEATURE_LEN {
            return Err(LeafError::Dimension { expected: FEATURE_LEN, got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(LeafError::InvalidInput(format!("feature {i} is not finite")));
        }
        Ok(FeatureVector { values, label, source: source.into() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn group(&self, g: FeatureGroup) -> &[f64] {
        let o = g.offset();
        &self.values[o..o + g.len()]
    }

    pub fn with_label(mut self, label: Option<usize>) -> Self {
        self.label = label;
        self
    }

    pub fn with_source(mut self, source: impl Into<PathBuf>) -> Self {
        self.source = source.into();
        self
    }
}

/// A selection of feature groups, always kept in canonical order.
///
/// Written as groups joined by `+`, e.g. `pft+hull+color`. `shen` contributes
/// `f2, f3, mf`; the token `shen2` selects `f2, f3` only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureSetSpec {
    groups: Vec<FeatureGroup>,
    shen_with_mf: bool,
}

impl FeatureSetSpec {
    pub fn new(groups: impl IntoIterator<Item = FeatureGroup>) -> Result<Self> {
        let mut groups: Vec<FeatureGroup> = groups.into_iter().collect();
        groups.sort();
        groups.dedup();
        if groups.is_empty() {
            return Err(LeafError::Config("feature set must name at least one group".into()));
        }
        Ok(FeatureSetSpec { groups, shen_with_mf: true })
    }

    pub fn with_shen_mf(mut self, include: bool) -> Self {
        self.shen_with_mf = include;
        self
    }

    pub fn groups(&self) -> &[FeatureGroup] {
        &self.groups
    }

    pub fn shen_with_mf(&self) -> bool {
        self.shen_with_mf
    }

    pub fn contains(&self, g: FeatureGroup) -> bool {
        self.groups.contains(&g)
    }

    /// Every group.
    pub fn all() -> Self {
        FeatureSetSpec::new(FeatureGroup::ALL).expect("nonempty")
    }

    /// The proposed system: every group except the auxiliary shape features.
    pub fn full() -> Self {
        FeatureSetSpec::ablation_row(10).expect("row 10 exists")
    }

    /// The feature combinations of the ablation table, rows 1 to 10.
    pub fn ablation_row(row: usize) -> Result<Self> {
        use FeatureGroup::*;
        let base = [Pft, Hull, Color, Vein, Glcm, Lacunarity];
        let groups: Vec<FeatureGroup> = match row {
            1 => vec![Pft],
            2 => vec![Pft, Hull],
            3 => vec![Pft, Hull, Color],
            4 => vec![Pft, Hull, Color, Vein],
            5 => vec![Pft, Hull, Color, Glcm],
            6 => vec![Pft, Hull, Color, Vein, Glcm],
            7 => vec![Pft, Hull, Color, Vein, Lacunarity],
            8 => base.to_vec(),
            9 => base.iter().copied().chain([AuxShape]).collect(),
            10 => base.iter().copied().chain([Shen]).collect(),
            _ => return Err(LeafError::Config(format!("ablation rows are 1..=10, got {row}"))),
        };
        FeatureSetSpec::new(groups)
    }

    pub fn group_len(&self, g: FeatureGroup) -> usize {
        if g == FeatureGroup::Shen && !self.shen_with_mf {
            2
        } else {
            g.len()
        }
    }

    pub fn dim(&self) -> usize {
        self.groups.iter().map(|&g| self.group_len(g)).sum()
    }
}

impl fmt::Display for FeatureSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .groups
            .iter()
            .map(|&g| if g == FeatureGroup::Shen && !self.shen_with_mf { "shen2" } else { g.name() })
            .collect();
        f.write_str(&names.join("+"))
    }
}

impl FromStr for FeatureSetSpec {
    type Err = LeafError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(row) = s.strip_prefix("row") {
            let n: usize = row.trim().parse().map_err(|_| LeafError::Config(format!("bad ablation row `{s}`")))?;
            return FeatureSetSpec::ablation_row(n);
        }
        let mut mf = true;
        let mut groups = Vec::new();
        for token in s.split('+').map(str::trim).filter(|t| !t.is_empty()) {
            if token == "shen2" {
                mf = false;
                groups.push(FeatureGroup::Shen);
            } else {
                groups.push(token.parse()?);
            }
        }
        Ok(FeatureSetSpec::new(groups)?.with_shen_mf(mf))
    }
}

impl Serialize for FeatureSetSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureSetSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Selected groups of `v`, concatenated in canonical order.
pub fn project(v: &FeatureVector, spec: &FeatureSetSpec) -> Vec<f64> {
    let mut out = Vec::with_capacity(spec.dim());
    for &g in spec.groups() {
        out.extend_from_slice(&v.group(g)[..spec.group_len(g)]);
    }
    out
}

/// Knobs of the extraction pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionParams {
    /// Gray levels of the co-occurrence matrices.
    pub glcm_levels: usize,
    /// Samples of the centroid-distance signature.
    pub signature_samples: usize,
    pub polar_radial: usize,
    pub polar_angular: usize,
    pub vein_polarity: VeinPolarity,
}

impl Default for ExtractionParams {
    fn default() -> Self {
        ExtractionParams {
            glcm_levels: DEFAULT_GLCM_LEVELS,
            signature_samples: DEFAULT_SIGNATURE_SAMPLES,
            polar_radial: DEFAULT_RADIAL_SAMPLES,
            polar_angular: DEFAULT_ANGULAR_SAMPLES,
            vein_polarity: VeinPolarity::Bright,
        }
    }
}

impl ExtractionParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(LeafError::Config(what.to_string()));
        if !(2..=256).contains(&self.glcm_levels) {
            return bad("glcm_levels must be in 2..=256");
        }
        if self.signature_samples < 4 {
            return bad("signature_samples must be at least 4");
        }
        if self.polar_radial < 8 || self.polar_angular < 8 {
            return bad("polar grid needs at least 8 bins per axis");
        }
        Ok(())
    }
}

/// Background margin kept around the leaf's bounding box. Wider than the
/// largest opening footprint, so the crop behaves like an infinite background.
const CROP_PADDING: usize = 8;
const BACKGROUND: u8 = 255;

/// Everything computed for one leaf, in the frame of its padded bounding box.
#[derive(Debug, Clone)]
pub struct LeafAnalysis {
    pub features: FeatureVector,
    pub rgb: ImageRgb,
    pub gray: GrayImage,
    pub mask: BinaryMask,
    pub veins: Vec<VeinLayer>,
}

fn crop(rgb: &ImageRgb, gray: &GrayImage, mask: &BinaryMask) -> Option<(ImageRgb, GrayImage, BinaryMask)> {
    let (x0, y0, x1, y1) = mask.bounding_box()?;
    let p = CROP_PADDING;
    let (w, h) = (x1 - x0 + 1 + 2 * p, y1 - y0 + 1 + 2 * p);
    // source coordinates, or None inside the synthetic padding
    let src = |x: usize, y: usize| {
        let (sx, sy) = ((x + x0).checked_sub(p)?, (y + y0).checked_sub(p)?);
        (sx < mask.width() && sy < mask.height()).then_some((sx, sy))
    };
    Some((
        ImageRgb::from_fn(w, h, |x, y| src(x, y).map_or([BACKGROUND; 3], |(sx, sy)| rgb.get(sx, sy))),
        GrayImage::from_fn(w, h, |x, y| src(x, y).map_or(BACKGROUND, |(sx, sy)| gray.get(sx, sy))),
        BinaryMask::from_fn(w, h, |x, y| src(x, y).is_some_and(|(sx, sy)| mask.get(sx, sy))),
    ))
}

fn analyze_at(img: &ImageRgb, params: &ExtractionParams, path: &Path) -> Result<LeafAnalysis> {
    params.validate()?;
    let stage = |name: &'static str| move |e: LeafError| e.at_stage(name, path);
    let gray = to_grayscale(img);
    let mask = segment_leaf(&gray).map_err(stage("segmentation"))?;
    let (rgb, gray, mask) =
        crop(img, &gray, &mask).ok_or_else(|| stage("segmentation")(LeafError::Segmentation("empty mask".into())))?;

    let contour = extract_contour(&mask).map_err(stage("contour"))?;
    let center = centroid(&mask).map_err(stage("contour"))?;
    let sig = radial_signature(&contour, center, params.signature_samples).map_err(stage("signature"))?;

    let pft = pft_from_mask(&mask, params.polar_radial, params.polar_angular).map_err(stage("pft"))?;
    let hull = hull_features(&mask, &contour).map_err(stage("hull"))?;
    let color = color_moments(&rgb, &gray, &mask).map_err(stage("color"))?;
    let veins = vein_layers(&gray, &mask, params.vein_polarity).map_err(stage("vein"))?;
    let glcm = glcm_feature_vector(&gray, &mask, params.glcm_levels).map_err(stage("glcm"))?;
    let lac = lacunarity_features(&rgb, &gray, &mask).map_err(stage("lacunarity"))?;
    let shen = shen_features(&sig).map_err(stage("shen"))?;
    let aux = aux_shape_features(&mask, &contour, &sig).map_err(stage("aux_shape"))?;

    let area = mask.count() as f64;
    let mut values = Vec::with_capacity(FEATURE_LEN);
    values.extend_from_slice(&pft.values);
    values.extend_from_slice(&[hull.solidity, hull.convexity]);
    values.extend_from_slice(&color.to_array());
    values.extend(veins.iter().map(|l| l.veins.count() as f64 / area));
    values.extend_from_slice(&glcm);
    values.extend_from_slice(&lac.to_array());
    values.extend_from_slice(&[shen.f2, shen.f3, shen.mf]);
    values.extend_from_slice(&[aux.eccentricity, aux.roundness, aux.dispersion]);
    let features = FeatureVector::new(values, None, path).map_err(stage("assembly"))?;
    Ok(LeafAnalysis { features, rgb, gray, mask, veins })
}

/// Full pipeline with its intermediate rasters, for inspection and debugging.
pub fn analyze(img: &ImageRgb, params: &ExtractionParams) -> Result<LeafAnalysis> {
    analyze_at(img, params, Path::new("<memory>"))
}

/// All eight feature groups of an in-memory leaf image.
///
/// The leaf is segmented on the full image and every group is then computed on
/// a padded crop around it, so integer translations give identical vectors.
pub fn extract_all(img: &ImageRgb, params: &ExtractionParams) -> Result<FeatureVector> {
    analyze(img, params).map(|a| a.features)
}

/// Loads and analyses an image file; errors name the failing stage and the file.
pub fn analyze_file(path: impl AsRef<Path>, params: &ExtractionParams) -> Result<LeafAnalysis> {
    let path = path.as_ref();
    let img = load_image(path).map_err(|e| e.at_stage("load", path))?;
    analyze_at(&img, params, path)
}

pub fn extract_file(path: impl AsRef<Path>, params: &ExtractionParams) -> Result<FeatureVector> {
    analyze_file(path, params).map(|a| a.features)
}

pub const CACHE_FORMAT: &str = "leafid-features";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
struct CacheHeader {
    format: String,
    version: u32,
    layout: String,
    params: ExtractionParams,
    classes: Vec<String>,
    rows: usize,
}

/// Feature vectors of a dataset together with the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureCache {
    pub params: ExtractionParams,
    /// Species names indexed by label.
    pub classes: Vec<String>,
    pub rows: Vec<FeatureVector>,
}

/// Writes the cache as a JSON header line followed by one
/// `path<TAB>label<TAB>v1,v2,...` line per leaf. Values use the shortest decimal
/// form that parses back to the same `f64`.
pub fn save_cache(cache: &FeatureCache, path: impl AsRef<Path>) -> Result<()> {
    let header = CacheHeader {
        format: CACHE_FORMAT.into(),
        version: CACHE_VERSION,
        layout: layout_string(),
        params: cache.params,
        classes: cache.classes.clone(),
        rows: cache.rows.len(),
    };
    let mut out = BufWriter::new(std::fs::File::create(path.as_ref())?);
    writeln!(out, "{}", serde_json::to_string(&header).map_err(|e| LeafError::Cache(e.to_string()))?)?;
    for row in &cache.rows {
        let src = row.source.to_str().ok_or_else(|| LeafError::Cache("source path is not UTF-8".into()))?;
        if src.contains(['\t', '\n', '\r']) {
            return Err(LeafError::Cache(format!("source path `{src}` contains a tab or newline")));
        }
        if let Some(l) = row.label {
            if l >= cache.classes.len() {
                return Err(LeafError::Cache(format!("label {l} has no class name")));
            }
        }
        let label = row.label.map(|l| l.to_string()).unwrap_or_default();
        let values: Vec<String> = row.values.iter().map(f64::to_string).collect();
        writeln!(out, "{src}\t{label}\t{}", values.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_cache(path: impl AsRef<Path>) -> Result<FeatureCache> {
    let path = path.as_ref();
    let err = |line: usize, msg: &str| LeafError::Cache(format!("{}:{line}: {msg}", path.display()));
    let mut lines = BufReader::new(std::fs::File::open(path)?).lines();
    let first = lines.next().ok_or_else(|| err(1, "missing header"))??;
    let header: CacheHeader = serde_json::from_str(&first).map_err(|e| err(1, &format!("bad header: {e}")))?;
    if header.format != CACHE_FORMAT {
        return Err(err(1, &format!("not a feature cache (format `{}`)", header.format)));
    }
    if header.version != CACHE_VERSION {
        return Err(err(1, &format!("unsupported cache version {}", header.version)));
    }
    if header.layout != layout_string() {
        return Err(err(1, &format!("feature layout `{}` differs from `{}`", header.layout, layout_string())));
    }
    let mut rows = Vec::with_capacity(header.rows);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let n = i + 2;
        let mut parts = line.split('\t');
        let (Some(src), Some(label), Some(vals), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(err(n, "expected three tab-separated fields"));
        };
        let label = match label {
            "" => None,
            l => Some(l.parse::<usize>().map_err(|_| err(n, "bad label"))?),
        };
        if label.is_some_and(|l| l >= header.classes.len()) {
            return Err(err(n, "label has no class name"));
        }
        let values = vals
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|_| err(n, &format!("bad value `{v}`"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(FeatureVector::new(values, label, src).map_err(|e| err(n, &e.to_string()))?);
    }
    if rows.len() != header.rows {
        return Err(err(1, &format!("header announces {} rows, found {}", header.rows, rows.len())));
    }
    Ok(FeatureCache { params: header.params, classes: header.classes, rows })
}

/// Loads a cache and checks that it was produced with `params`.
pub fn load_cache_expecting(path: impl AsRef<Path>, params: &ExtractionParams) -> Result<FeatureCache> {
    let cache = load_cache(path.as_ref())?;
    if cache.params != *params {
        return Err(LeafError::Cache(format!(
            "{} was extracted with {:?}, expected {:?}",
            path.as_ref().display(),
            cache.params,
            params
        )));
    }
    Ok(cache)
}
