//! Plant identification from photographs of single leaves.
//!
//! A leaf is segmented from its background, described by shape, colour,
//! texture and vein features, and assigned to a species by a Gaussian
//! classifier with a shared covariance matrix.
//!
//! The pipeline in order:
//!
//! - [`imaging`]: loading, Otsu segmentation, contour tracing, radial signature
//! - [`shape`], [`pft`]: convex hull, Shen moments and polar Fourier descriptors
//! - [`color`], [`texture`], [`vein`]: colour moments, GLCM and lacunarity, top-hat veins
//! - [`features`]: the assembled 88-value vector, feature-set selection and caches
//! - [`classifier`]: fitting, posteriors and model files
//! - [`harness`]: dataset manifests, splits, evaluation and ablation
//!
//! [`synth`] renders seeded synthetic leaves for tests and examples, and
//! [`cli`] backs the `leafid` binary.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod cli;
pub mod color;
pub mod config;
pub mod error;
pub mod features;
pub mod harness;
pub mod imaging;
pub mod morphology;
pub mod pft;
pub mod shape;
pub mod synth;
pub mod texture;
pub mod vein;

pub use error::{LeafError, Result};
