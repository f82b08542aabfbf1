//! Line drawings from 3D meshes and shaded images.
//!
//! Object-space contours and feature edges, image-space valley lines of a
//! rendered luminance image, stroke thickness from shading, curvature-guided
//! hatching, and evaluation metrics. Everything here is `no_std` + `alloc`;
//! file formats and the command-line tool live in the `linedraw` crate.

#![cfg_attr(not(test), no_std)]
// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod bvh;
pub mod camera;
pub mod contour;
pub mod curvature;
pub mod eval;
pub mod features;
pub mod hatching;
pub mod image;
pub mod math;
pub mod mesh;
pub mod pipeline;
pub mod raster;
pub mod render;
pub mod shapes;
pub mod spatial;
pub mod strokes;
pub mod valleys;
pub mod visibility;
