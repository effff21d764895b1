//! Image loading, grayscale conversion, leaf segmentation and boundary extraction.

mod contour;
mod raster;
mod segment;

pub(crate) use contour::shoelace2;
pub use contour::{
    centroid, extract_contour, radial_signature, Centroid, Contour, RadialSignature, DEFAULT_SIGNATURE_SAMPLES,
};
pub use raster::{load_image, to_grayscale, BinaryMask, GrayImage, ImageRgb, Point};
pub use segment::{count_components, fill_holes, histogram, largest_component, otsu_threshold, segment_leaf};
