use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LeafError, Result};

/// Which benchmark a manifest describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Flavia,
    Foliage,
    Custom,
}

/// How images and labels are laid out under the dataset root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifestLayout {
    /// One subdirectory per species; the directory name is the species.
    ClassSubdirs,
    /// Flat directory of numerically named images, mapped to species by the
    /// bundled range table.
    FlaviaRanges,
    /// A `path,label,species` CSV with a header line. The root is either the CSV
    /// itself or a directory holding `manifest.csv`.
    ManifestFile,
}

impl FromStr for ManifestLayout {
    type Err = LeafError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "class-subdirs" => Ok(ManifestLayout::ClassSubdirs),
            "flavia-ranges" => Ok(ManifestLayout::FlaviaRanges),
            "manifest-file" => Ok(ManifestLayout::ManifestFile),
            other => Err(LeafError::Config(format!(
                "unknown layout `{other}` (expected class-subdirs, flavia-ranges or manifest-file)"
            ))),
        }
    }
}

impl fmt::Display for ManifestLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManifestLayout::ClassSubdirs => "class-subdirs",
            ManifestLayout::FlaviaRanges => "flavia-ranges",
            ManifestLayout::ManifestFile => "manifest-file",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Relative to the manifest root.
    pub path: PathBuf,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub kind: DatasetKind,
    /// Species names indexed by label.
    pub classes: Vec<String>,
    /// Sorted by label, then path.
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Validates and normalises a manifest: at least two classes, dense labels,
    /// unique paths.
    pub fn new(
        root: PathBuf,
        kind: DatasetKind,
        classes: Vec<String>,
        mut entries: Vec<ManifestEntry>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(LeafError::Manifest(format!("no images found under {}", root.display())));
        }
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(&e.path) {
                return Err(LeafError::Manifest(format!("duplicate path {}", e.path.display())));
            }
        }
        let mut used = vec![false; classes.len()];
        for e in &entries {
            *used.get_mut(e.label).ok_or_else(|| {
                LeafError::Manifest(format!("label {} of {} has no class", e.label, e.path.display()))
            })? = true;
        }
        if let Some(l) = used.iter().position(|u| !u) {
            return Err(LeafError::Manifest(format!("class {l} (`{}`) has no images", classes[l])));
        }
        if classes.len() < 2 {
            return Err(LeafError::Manifest("at least two classes are required".into()));
        }
        entries.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.path.cmp(&b.path)));
        Ok(DatasetManifest { root, kind, classes, entries })
    }

    pub fn with_kind(mut self, kind: DatasetKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn species(&self, label: usize) -> &str {
        &self.classes[label]
    }

    pub fn absolute(&self, entry: &ManifestEntry) -> PathBuf {
        self.root.join(&entry.path)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
}

fn sorted_dir(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = std::fs::read_dir(dir)
        .map_err(|e| LeafError::Manifest(format!("cannot read {}: {e}", dir.display())))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn build_manifest(root: impl AsRef<Path>, layout: ManifestLayout) -> Result<DatasetManifest> {
    let root = root.as_ref();
    match layout {
        ManifestLayout::ClassSubdirs => class_subdirs(root),
        ManifestLayout::FlaviaRanges => flavia_ranges(root),
        ManifestLayout::ManifestFile => manifest_file(root),
    }
}

fn class_subdirs(root: &Path) -> Result<DatasetManifest> {
    let mut classes = Vec::new();
    let mut entries = Vec::new();
    for dir in sorted_dir(root)?.into_iter().filter(|p| p.is_dir()) {
        let images: Vec<PathBuf> = sorted_dir(&dir)?.into_iter().filter(|p| p.is_file() && is_image(p)).collect();
        if images.is_empty() {
            continue;
        }
        let name = file_name(&dir);
        for img in images {
            entries.push(ManifestEntry { path: PathBuf::from(&name).join(file_name(&img)), label: classes.len() });
        }
        classes.push(name);
    }
    DatasetManifest::new(root.to_path_buf(), DatasetKind::Custom, classes, entries)
}

/// Inclusive filename-number range of one Flavia species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeciesRange {
    pub first: u32,
    pub last: u32,
    pub species: String,
}

const FLAVIA_TABLE: &str = include_str!("../../data/flavia_ranges.csv");

/// Parses a `first,last,species` table; `#` lines are comments and the first
/// other line is the header.
pub fn parse_range_table(text: &str) -> Result<Vec<SpeciesRange>> {
    let mut rows = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if rows.next() != Some("first,last,species") {
        return Err(LeafError::Manifest("range table must start with `first,last,species`".into()));
    }
    let table = rows
        .map(|line| {
            let mut parts = line.splitn(3, ',');
            let mut num = || {
                parts
                    .next()
                    .and_then(|s| s.trim().parse::<u32>().ok())
                    .ok_or_else(|| LeafError::Manifest(format!("bad range line `{line}`")))
            };
            let (first, last) = (num()?, num()?);
            let species = parts.next().map(str::trim).unwrap_or("").to_string();
            if first > last || species.is_empty() {
                return Err(LeafError::Manifest(format!("bad range line `{line}`")));
            }
            Ok(SpeciesRange { first, last, species })
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, a) in table.iter().enumerate() {
        for b in &table[i + 1..] {
            if a.first <= b.last && b.first <= a.last {
                return Err(LeafError::Manifest(format!("ranges of `{}` and `{}` overlap", a.species, b.species)));
            }
        }
    }
    Ok(table)
}

/// The bundled Flavia table: 32 species, 1907 images.
pub fn flavia_range_table() -> Vec<SpeciesRange> {
    parse_range_table(FLAVIA_TABLE).expect("bundled table is valid")
}

fn flavia_ranges(root: &Path) -> Result<DatasetManifest> {
    let table = flavia_range_table();
    let mut by_species: BTreeMap<usize, Vec<PathBuf>> = BTreeMap::new();
    let mut offenders = Vec::new();
    for p in sorted_dir(root)?.into_iter().filter(|p| p.is_file() && is_image(p)) {
        let number = p.file_stem().and_then(|s| s.to_str()).and_then(|s| s.parse::<u32>().ok());
        match number.and_then(|n| table.iter().position(|r| (r.first..=r.last).contains(&n))) {
            Some(k) => by_species.entry(k).or_default().push(PathBuf::from(file_name(&p))),
            None => offenders.push(file_name(&p)),
        }
    }
    if !offenders.is_empty() {
        return Err(LeafError::Manifest(format!("files outside every species range: {}", offenders.join(", "))));
    }
    // species absent from the directory are dropped so labels stay dense
    let mut classes = Vec::new();
    let mut entries = Vec::new();
    for (k, paths) in by_species {
        entries.extend(paths.into_iter().map(|path| ManifestEntry { path, label: classes.len() }));
        classes.push(table[k].species.clone());
    }
    DatasetManifest::new(root.to_path_buf(), DatasetKind::Flavia, classes, entries)
}

fn manifest_file(root: &Path) -> Result<DatasetManifest> {
    let file = if root.is_dir() { root.join("manifest.csv") } else { root.to_path_buf() };
    let base = file.parent().map(Path::to_path_buf).unwrap_or_default();
    let text = std::fs::read_to_string(&file)
        .map_err(|e| LeafError::Manifest(format!("cannot read {}: {e}", file.display())))?;
    let err = |n: usize, msg: &str| LeafError::Manifest(format!("{}:{n}: {msg}", file.display()));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "path,label,species" => {}
        _ => return Err(err(1, "expected header `path,label,species`")),
    }
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut entries = Vec::new();
    for (i, line) in lines {
        let n = i + 1;
        let mut parts = line.splitn(3, ',').map(str::trim);
        let (Some(path), Some(label), Some(species)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(n, "expected `path,label,species`"));
        };
        let label: usize = label.parse().map_err(|_| err(n, "label must be a nonnegative integer"))?;
        match names.get(&label) {
            Some(s) if s != species => return Err(err(n, &format!("label {label} is both `{s}` and `{species}`"))),
            _ => {
                names.insert(label, species.to_string());
            }
        }
        entries.push(ManifestEntry { path: PathBuf::from(path), label });
    }
    if let Some((expected, got)) = names.keys().enumerate().find(|(i, l)| i != *l) {
        return Err(err(1, &format!("labels must be dense 0..c-1, label {expected} is missing (next is {got})")));
    }
    DatasetManifest::new(base, DatasetKind::Custom, names.into_values().collect(), entries)
}
