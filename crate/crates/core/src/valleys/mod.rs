//! Image-space line extraction: valleys of a luminance image.

pub mod detect;
pub mod link;
pub mod suggestive;

pub use detect::{detect_valleys, ValleyError, ValleyMap, ValleyParams};
pub use link::{link_valleys, LinkParams, ValleyPolyline};
pub use suggestive::{suggestive_strokes, tag_valley_lines, SuggestiveParams, TaggedPolyline, ValleyTag};

use crate::image::ScalarImage;

/// Gray level of a linear RGB color (Rec. 709 weights).
pub fn luminance(rgb: [f64; 3]) -> f64 {
    0.2126 * rgb[0] + 0.7152 * rgb[1] + 0.0722 * rgb[2]
}

/// Luminance of an RGB raster given as interleaved channel values in `[0, 1]`.
pub fn luminance_image(width: usize, height: usize, rgb: &[[f64; 3]]) -> ScalarImage {
    ScalarImage::from_vec(width, height, rgb.iter().map(|&c| luminance(c)).collect())
}
