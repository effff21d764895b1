//! Texture features: Haralick statistics of gray-level co-occurrence matrices and
//! global lacunarity.

mod glcm;
mod lacunarity;

pub use glcm::{
    compute_glcm, glcm_feature_vector, haralick_features, Glcm, GlcmDirection, HaralickFeatures, DEFAULT_GLCM_LEVELS,
    GLCM_LEN,
};
pub use lacunarity::{lacunarity_features, Lacunarity, LacunarityFeatures, LACUNARITY_LEN};
