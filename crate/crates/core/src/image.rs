//! Single-channel float rasters and boolean masks.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{floor, Vec2};

/// Row-major single-channel raster. Luminance images hold values in `[0, 1]`;
/// depth images hold positive view depths with `+inf` for empty pixels.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ScalarImage {
    pub fn new(width: usize, height: usize, fill: f64) -> Self {
        ScalarImage {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    /// Wraps row-major data. Panics if the length does not match.
    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height, "image data length");
        ScalarImage { width, height, data }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        ScalarImage { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    /// Value of the pixel containing image point `p`, if inside.
    pub fn sample_nearest(&self, p: Vec2) -> Option<f64> {
        let (x, y) = self.pixel_of(p)?;
        Some(self.get(x, y))
    }

    /// Pixel index containing image point `p`.
    pub fn pixel_of(&self, p: Vec2) -> Option<(usize, usize)> {
        if !(p.x >= 0.0 && p.y >= 0.0) {
            return None;
        }
        let (x, y) = (floor(p.x) as usize, floor(p.y) as usize);
        if x < self.width && y < self.height {
            Some((x, y))
        } else {
            None
        }
    }

    /// Bilinear sample with pixel centers at half-integers, clamped at borders.
    pub fn sample_bilinear(&self, p: Vec2) -> f64 {
        let fx = (p.x - 0.5).clamp(0.0, (self.width - 1) as f64);
        let fy = (p.y - 0.5).clamp(0.0, (self.height - 1) as f64);
        let x0 = floor(fx) as usize;
        let y0 = floor(fy) as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let tx = fx - x0 as f64;
        let ty = fy - y0 as f64;
        let top = self.get(x0, y0) * (1.0 - tx) + self.get(x1, y0) * tx;
        let bottom = self.get(x0, y1) * (1.0 - tx) + self.get(x1, y1) * tx;
        top * (1.0 - ty) + bottom * ty
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarImage {
        ScalarImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `1 - v` per pixel.
    pub fn inverted(&self) -> ScalarImage {
        self.map(|v| 1.0 - v)
    }

    /// Rotates by 90° counter-clockwise: `out(x', y') = in(W - 1 - y', x')`.
    pub fn rotated_ccw(&self) -> ScalarImage {
        let (w, h) = (self.width, self.height);
        ScalarImage::from_fn(h, w, |x, y| self.get(w - 1 - y, x))
    }

    /// Box-filter downsampling by an integer factor (partial blocks dropped).
    pub fn downsample_box(&self, factor: usize) -> ScalarImage {
        let (w, h) = (self.width / factor, self.height / factor);
        let norm = (factor * factor) as f64;
        ScalarImage::from_fn(w, h, |bx, by| {
            let mut s = 0.0;
            for y in by * factor..(by + 1) * factor {
                for x in bx * factor..(bx + 1) * factor {
                    s += self.get(x, y);
                }
            }
            s / norm
        })
    }

    /// Minimum and maximum over finite values, if any.
    pub fn finite_range(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.data {
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Row-major boolean raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Mask::new(width, height);
        for y in 0..height {
            for x in 0..width {
                m.data[y * width + x] = f(x, y);
            }
        }
        m
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % self.width, i / self.width))
    }

    pub fn rotated_ccw(&self) -> Mask {
        let (w, h) = (self.width, self.height);
        Mask::from_fn(h, w, |x, y| self.get(w - 1 - y, x))
    }

    pub fn to_image(&self) -> ScalarImage {
        ScalarImage::from_vec(
            self.width,
            self.height,
            self.data.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
    }
}

/// Interleaved RGB raster with an explicit source bit depth.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorImage {
    pub width: usize,
    pub height: usize,
    pub bit_depth: u8,
    pub data: Vec<[u16; 3]>,
}
