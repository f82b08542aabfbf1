//! Scan conversion of drawings with per-point stroke width.

use alloc::vec;

use crate::image::ScalarImage;
use crate::math::{ceil, floor, Vec2};

use super::{DrawingDocument, Stroke, StrokeError};

/// True if `q` lies within the swept disc of segment `a`-`b` whose radius
/// varies linearly from `ra` to `rb`.
#[inline]
fn in_capsule(q: Vec2, a: Vec2, b: Vec2, ra: f64, rb: f64) -> bool {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > 0.0 { ((q - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let r = ra + (rb - ra) * t;
    (q - (a + ab * t)).norm() <= r
}

fn cover_stroke(stroke: &Stroke, s: usize, w: usize, h: usize, cov: &mut [bool]) {
    let (sw, sh) = (w * s, h * s);
    let inv = 1.0 / s as f64;
    for i in 0..stroke.points.len() - 1 {
        let (a, b) = (stroke.points[i], stroke.points[i + 1]);
        let (ra, rb) = (0.5 * stroke.thickness[i], 0.5 * stroke.thickness[i + 1]);
        let r = ra.max(rb);
        let lo = Vec2::new(a.x.min(b.x) - r, a.y.min(b.y) - r);
        let hi = Vec2::new(a.x.max(b.x) + r, a.y.max(b.y) + r);
        // subsample j has center (j + 0.5) / s
        let x0 = ceil(lo.x * s as f64 - 0.5).max(0.0) as usize;
        let y0 = ceil(lo.y * s as f64 - 0.5).max(0.0) as usize;
        let x1 = floor(hi.x * s as f64 - 0.5);
        let y1 = floor(hi.y * s as f64 - 0.5);
        if x1 < 0.0 || y1 < 0.0 {
            continue;
        }
        let x1 = (x1 as usize).min(sw.saturating_sub(1));
        let y1 = (y1 as usize).min(sh.saturating_sub(1));
        for y in y0..=y1 {
            for x in x0..=x1 {
                let idx = y * sw + x;
                if cov[idx] {
                    continue;
                }
                let q = Vec2::new((x as f64 + 0.5) * inv, (y as f64 + 0.5) * inv);
                if in_capsule(q, a, b, ra, rb) {
                    cov[idx] = true;
                }
            }
        }
    }
}

/// Rasterizes `doc` at its page size. Each pixel is the box-filtered mean
/// of `supersample²` point samples; a sample is ink if it lies within half
/// the interpolated width of any stroke segment (round caps and joins).
/// Paper and ink luminance follow the document polarity.
pub fn rasterize_drawing(doc: &DrawingDocument, supersample: usize) -> Result<ScalarImage, StrokeError> {
    if !matches!(supersample, 1 | 2 | 4) {
        return Err(StrokeError::Supersample(supersample));
    }
    let (w, h, s) = (doc.width, doc.height, supersample);
    let mut cov = vec![false; w * h * s * s];
    for stroke in &doc.strokes {
        cover_stroke(stroke, s, w, h, &mut cov);
    }
    let paper = doc.polarity.paper();
    let ink = doc.polarity.ink();
    let norm = (s * s) as f64;
    Ok(ScalarImage::from_fn(w, h, |x, y| {
        let mut n = 0usize;
        for j in 0..s {
            let row = (y * s + j) * w * s;
            for i in 0..s {
                n += cov[row + x * s + i] as usize;
            }
        }
        if n == 0 {
            paper
        } else {
            let c = n as f64 / norm;
            paper + (ink - paper) * c
        }
    }))
}
