use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LeafError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LeafError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("unsupported or corrupt image: {0}")]
    Format(String),

    #[error("segmentation failed: {0}")]
    Segmentation(String),

    #[error("degenerate contour: {0}")]
    DegenerateContour(String),

    #[error("degenerate hull: all points are collinear")]
    DegenerateHull,

    #[error("empty region: {0}")]
    EmptyRegion(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("feature cache error: {0}")]
    Cache(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("classifier error: {0}")]
    Classifier(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("split error: {0}")]
    Split(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("feature set `{spec}`: {source}")]
    Spec {
        spec: String,
        #[source]
        source: Box<LeafError>,
    },

    #[error("{stage} failed for {}: {source}", path.display())]
    Stage {
        stage: &'static str,
        path: PathBuf,
        #[source]
        source: Box<LeafError>,
    },
}

impl LeafError {
    pub(crate) fn at_stage(self, stage: &'static str, path: impl Into<PathBuf>) -> Self {
        LeafError::Stage { stage, path: path.into(), source: Box::new(self) }
    }
}
