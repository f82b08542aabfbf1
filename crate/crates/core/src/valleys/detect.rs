//! Valley (dark line) detection from second derivatives of a smoothed image.
//!
//! Smoothing and differentiation run in 64-bit fixed point so the result is
//! independent of summation order: a 90° rotation of the input rotates the
//! valley mask exactly, and an affine gain `a L + b` with dyadic `b`
//! leaves it unchanged when `a` is a power of two and the scaled inputs stay
//! on the fixed-point grid.

use alloc::vec;
use alloc::vec::Vec;

use crate::image::{Mask, ScalarImage};
use crate::math::{ceil, exp, line_angle, round, sqrt, Vec2};

/// Fixed-point scale of input luminance.
const Q_BITS: u32 = 16;
/// Kernel taps sum to `2^K_BITS`.
const K_BITS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValleyParams {
    /// Gaussian smoothing scale in pixels.
    pub sigma: f64,
    /// Only pixels darker than this can be valley pixels.
    pub tau: f64,
    /// Minimum largest Hessian eigenvalue (cross-valley curvature).
    pub min_strength: f64,
}

impl Default for ValleyParams {
    fn default() -> Self {
        ValleyParams {
            sigma: 1.0,
            tau: 0.25,
            min_strength: 0.002,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValleyError {
    #[error("sigma {0} must be at least 0.5")]
    Sigma(f64),
    #[error("tau {0} outside (0, 1]")]
    Tau(f64),
    #[error("min strength {0} must be >= 0")]
    MinStrength(f64),
    #[error("smoothing kernel of radius {radius} exceeds the {width}x{height} image")]
    KernelTooLarge { radius: usize, width: usize, height: usize },
}

impl ValleyParams {
    pub fn validate(&self) -> Result<(), ValleyError> {
        if !(self.sigma >= 0.5) {
            return Err(ValleyError::Sigma(self.sigma));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(ValleyError::Tau(self.tau));
        }
        if !(self.min_strength >= 0.0) {
            return Err(ValleyError::MinStrength(self.min_strength));
        }
        Ok(())
    }

    pub fn kernel_radius(&self) -> usize {
        ceil(3.0 * self.sigma) as usize
    }

    /// Pixels this close to the image border are never valley pixels.
    pub fn border(&self) -> usize {
        ceil(self.sigma) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValleyMap {
    /// Largest Hessian eigenvalue, clamped at zero.
    pub strength: ScalarImage,
    /// Valley tangent angle in `[0, π)`; NaN where the Hessian is isotropic.
    pub orientation: ScalarImage,
    pub mask: Mask,
    /// Sub-pixel offset from each pixel center to the valley center line
    /// (zero outside the mask).
    pub offset: Vec<Vec2>,
}

impl ValleyMap {
    pub fn width(&self) -> usize {
        self.mask.width()
    }

    pub fn height(&self) -> usize {
        self.mask.height()
    }

    /// Sub-pixel valley point of a mask pixel in image coordinates.
    pub fn point(&self, x: usize, y: usize) -> Vec2 {
        let o = self.offset[y * self.width() + x];
        Vec2::new(x as f64 + 0.5 + o.x, y as f64 + 0.5 + o.y)
    }
}

/// Integer Gaussian taps `w[-r..=r]` summing exactly to `2^K_BITS`.
pub fn gaussian_kernel(sigma: f64) -> Vec<i64> {
    let r = ceil(3.0 * sigma) as i64;
    let g: Vec<f64> = (-r..=r).map(|k| exp(-((k * k) as f64) / (2.0 * sigma * sigma))).collect();
    let total: f64 = g.iter().sum();
    let scale = (1i64 << K_BITS) as f64;
    let mut w: Vec<i64> = g.iter().map(|v| round(v / total * scale) as i64).collect();
    // fold the rounding residue into the center tap
    let sum: i64 = w.iter().sum();
    w[r as usize] += (1i64 << K_BITS) - sum;
    w
}

/// Reflect-101 border index (`-1 -> 1`, `n -> n - 2`); requires `i` within
/// one image length of the range.
#[inline]
fn reflect(i: i64, n: i64) -> usize {
    let j = if i < 0 {
        -i
    } else if i >= n {
        2 * (n - 1) - i
    } else {
        i
    };
    j.clamp(0, n - 1) as usize
}

/// Separable fixed-point Gaussian of `round(L * 2^Q_BITS)`; the result is
/// scaled by `2^(Q_BITS + 2 K_BITS)`.
fn smooth_fixed(img: &ScalarImage, kernel: &[i64]) -> Vec<i64> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let r = (kernel.len() / 2) as i64;
    let q: Vec<i64> = img
        .data()
        .iter()
        .map(|&v| round(v * (1i64 << Q_BITS) as f64) as i64)
        .collect();
    let mut tmp = vec![0i64; q.len()];
    for y in 0..h {
        let row = (y * w) as usize;
        for x in 0..w {
            let mut s = 0i64;
            for (k, &wk) in kernel.iter().enumerate() {
                s += wk * q[row + reflect(x + k as i64 - r, w)];
            }
            tmp[row + x as usize] = s;
        }
    }
    let mut out = vec![0i64; q.len()];
    for y in 0..h {
        for x in 0..w {
            let mut s = 0i64;
            for (k, &wk) in kernel.iter().enumerate() {
                s += wk * tmp[reflect(y + k as i64 - r, h) * w as usize + x as usize];
            }
            out[(y * w + x) as usize] = s;
        }
    }
    out
}

/// Hessian and gradient of the smoothed image at one pixel, in luminance
/// units per pixel (squared).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalDerivatives {
    pub gx: f64,
    pub gy: f64,
    pub hxx: f64,
    pub hxy: f64,
    pub hyy: f64,
}

/// Central-difference derivatives of the smoothed image. Every scale factor
/// is a power of two, so conversion to floating point is exact up to the
/// final rounding of each integer.
pub fn derivatives(img: &ScalarImage, sigma: f64) -> Vec<LocalDerivatives> {
    let s = smooth_fixed(img, &gaussian_kernel(sigma));
    let (w, h) = (img.width() as i64, img.height() as i64);
    let at = |x: i64, y: i64| s[reflect(y, h) * w as usize + reflect(x, w)];
    let unit = (1u64 << (Q_BITS + 2 * K_BITS)) as f64;
    let mut out = Vec::with_capacity(s.len());
    for y in 0..h {
        for x in 0..w {
            let c = at(x, y);
            let (l, r, u, d) = (at(x - 1, y), at(x + 1, y), at(x, y - 1), at(x, y + 1));
            let gx2 = r - l;
            let gy2 = d - u;
            let hxx = r - 2 * c + l;
            let hyy = d - 2 * c + u;
            let hxy4 = at(x + 1, y + 1) - at(x + 1, y - 1) - at(x - 1, y + 1) + at(x - 1, y - 1);
            out.push(LocalDerivatives {
                gx: gx2 as f64 / (2.0 * unit),
                gy: gy2 as f64 / (2.0 * unit),
                hxx: hxx as f64 / unit,
                hxy: hxy4 as f64 / (4.0 * unit),
                hyy: hyy as f64 / unit,
            });
        }
    }
    out
}

/// Bilinear sample of `s` at pixel `(x, y)` displaced by `d` (`|d| <= 1`
/// per axis). The four weighted terms are summed in sorted order so the
/// result does not depend on axis order, which keeps the detector exact
/// under 90° rotations.
fn sample_offset(s: &[f64], w: usize, x: usize, y: usize, d: Vec2) -> f64 {
    let (ax, ay) = (d.x.abs(), d.y.abs());
    let nx = if d.x >= 0.0 { x + 1 } else { x - 1 };
    let ny = if d.y >= 0.0 { y + 1 } else { y - 1 };
    let mut terms = [
        (1.0 - ax) * (1.0 - ay) * s[y * w + x],
        ax * (1.0 - ay) * s[y * w + nx],
        (1.0 - ax) * ay * s[ny * w + x],
        ax * ay * s[ny * w + nx],
    ];
    terms.sort_by(f64::total_cmp);
    ((terms[0] + terms[1]) + terms[2]) + terms[3]
}

/// Detects valley pixels of `img` (values nominally in `[0, 1]`).
///
/// Valley strength is the larger Hessian eigenvalue `λ+` of the smoothed
/// image, clamped at zero; its eigenvector is the cross-valley direction.
/// Candidates are darker than `tau`, stronger than `min_strength`, and have
/// `λ+ >= |λ-|`. The mask keeps candidates whose strength is a local maximum
/// along the cross-valley direction, sampled one pixel to either side, and
/// the parabola through the three strengths gives the sub-pixel offset. Pixels
/// within `ceil(sigma)` of the border are excluded.
pub fn detect_valleys(img: &ScalarImage, params: &ValleyParams) -> Result<ValleyMap, ValleyError> {
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let radius = params.kernel_radius();
    if 2 * radius + 1 > w.min(h) {
        return Err(ValleyError::KernelTooLarge { radius, width: w, height: h });
    }
    let der = derivatives(img, params.sigma);
    let border = params.border();
    let mut strength = ScalarImage::new(w, h, 0.0);
    let mut orientation = ScalarImage::new(w, h, f64::NAN);
    let mut normals = vec![Vec2::ZERO; w * h];
    let mut candidate = vec![false; w * h];

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let d = der[i];
            let mean = 0.5 * (d.hxx + d.hyy);
            let half = 0.5 * (d.hxx - d.hyy);
            let r = sqrt(half * half + d.hxy * d.hxy);
            let lp = mean + r;
            let lm = mean - r;
            strength.data_mut()[i] = lp.max(0.0);
            if r == 0.0 {
                continue;
            }
            // columns of (H - λ- I) span the λ+ eigenvector
            let pxx = d.hxx - lm;
            let pyy = d.hyy - lm;
            let normal = if pxx >= pyy { Vec2::new(pxx, d.hxy) } else { Vec2::new(d.hxy, pyy) };
            normals[i] = normal;
            orientation.data_mut()[i] = line_angle(-normal.y, normal.x);
            let inside = x >= border && y >= border && x + border < w && y + border < h;
            candidate[i] = inside && lp > params.min_strength && mean >= 0.0 && img.get(x, y) < params.tau;
        }
    }

    let mut mask = Mask::new(w, h);
    let mut offset = vec![Vec2::ZERO; w * h];
    let s = strength.data();
    for y in border..h.saturating_sub(border) {
        for x in border..w.saturating_sub(border) {
            let i = y * w + x;
            if !candidate[i] {
                continue;
            }
            let n = normals[i].normalize();
            let sc = s[i];
            let sf = sample_offset(s, w, x, y, n);
            let sb = sample_offset(s, w, x, y, -n);
            if !(sc >= sf && sc >= sb) {
                continue;
            }
            mask.set(x, y, true);
            let curv = sf - 2.0 * sc + sb;
            if curv < 0.0 {
                offset[i] = n * (0.5 * (sb - sf) / curv);
            }
        }
    }
    Ok(ValleyMap {
        strength,
        orientation,
        mask,
        offset,
    })
}
