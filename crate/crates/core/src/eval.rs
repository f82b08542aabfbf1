//! Metrics comparing drawings with renders and with each other.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::camera::Camera;
use crate::contour::ContourSet;
use crate::image::{Mask, ScalarImage};
use crate::math::{ceil, floor, Vec2, PI};
use crate::spatial::SegmentIndex;
use crate::strokes::{rasterize_drawing, DrawingDocument, Polarity, Stroke, StrokeError, StrokeTag};

/// Samples per pixel of arclength for polyline comparisons.
pub const SAMPLES_PER_PX: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("drawing is {doc:?} but render is {render:?}")]
    SizeMismatch { doc: (usize, usize), render: (usize, usize) },
    #[error("drawing has no ink over the rendered object")]
    NoInk,
    #[error("render covers no pixels")]
    EmptyRender,
    #[error("no visible contour samples")]
    NoContour,
    #[error("chamfer needs two non-empty polyline sets")]
    EmptyPolylines,
    #[error("radius must be non-negative, got {0}")]
    Radius(f64),
    #[error(transparent)]
    Raster(#[from] StrokeError),
}

/// Ink pixels of a drawing rasterized at its page size (one sample per
/// pixel): darker than mid-gray for dark-on-light, brighter otherwise.
pub fn ink_mask(doc: &DrawingDocument) -> Result<Mask, EvalError> {
    let img = rasterize_drawing(doc, 1)?;
    Ok(Mask::from_fn(doc.width, doc.height, |x, y| {
        let v = img.get(x, y);
        match doc.polarity {
            Polarity::DarkOnLight => v < 0.5,
            Polarity::LightOnDark => v > 0.5,
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarknessScore {
    pub mean_under_ink: f64,
    pub mean_elsewhere: f64,
    /// `mean_under_ink / mean_elsewhere`.
    pub ratio: f64,
}

/// Mean render luminance under ink versus under the remaining pixels,
/// counting only pixels with finite depth (the rendered object).
pub fn darkness_score(doc: &DrawingDocument, render: &ScalarImage, depth: &ScalarImage) -> Result<DarknessScore, EvalError> {
    let size = (render.width(), render.height());
    if (doc.width, doc.height) != size || (depth.width(), depth.height()) != size {
        return Err(EvalError::SizeMismatch {
            doc: (doc.width, doc.height),
            render: size,
        });
    }
    darkness_from_mask(&ink_mask(doc)?, render, depth)
}

/// [`darkness_score`] for a precomputed ink mask.
pub fn darkness_from_mask(ink: &Mask, render: &ScalarImage, depth: &ScalarImage) -> Result<DarknessScore, EvalError> {
    let (mut under, mut n_under, mut rest, mut n_rest) = (0.0, 0usize, 0.0, 0usize);
    for y in 0..render.height() {
        for x in 0..render.width() {
            if !depth.get(x, y).is_finite() {
                continue;
            }
            let v = render.get(x, y);
            if ink.get(x, y) {
                under += v;
                n_under += 1;
            } else {
                rest += v;
                n_rest += 1;
            }
        }
    }
    if n_under == 0 {
        return Err(EvalError::NoInk);
    }
    if n_rest == 0 {
        return Err(EvalError::EmptyRender);
    }
    let mean_under_ink = under / n_under as f64;
    let mean_elsewhere = rest / n_rest as f64;
    Ok(DarknessScore {
        mean_under_ink,
        mean_elsewhere,
        ratio: mean_under_ink / mean_elsewhere,
    })
}

/// Points along each polyline at least `per_px` per pixel of arclength,
/// including every vertex.
pub fn sample_polylines(polylines: &[Vec<Vec2>], per_px: f64) -> Vec<Vec2> {
    let mut out = Vec::new();
    for pl in polylines {
        let Some(&first) = pl.first() else { continue };
        out.push(first);
        for w in pl.windows(2) {
            let n = ceil(w[0].distance(w[1]) * per_px).max(1.0) as usize;
            for k in 1..=n {
                out.push(w[0].lerp(w[1], k as f64 / n as f64));
            }
        }
    }
    out
}

/// Fraction of projected visible contour samples with an ink pixel center
/// within `radius`.
pub fn contour_coverage(doc: &DrawingDocument, contours: &ContourSet, camera: &Camera, radius: f64) -> Result<f64, EvalError> {
    let polylines: Vec<Vec<Vec2>> = contours.project(camera).into_iter().map(|(_, p)| p).collect();
    coverage_of(&ink_mask(doc)?, &polylines, radius)
}

/// [`contour_coverage`] for an ink mask and already projected polylines.
pub fn coverage_of(ink: &Mask, polylines: &[Vec<Vec2>], radius: f64) -> Result<f64, EvalError> {
    if !(radius >= 0.0) {
        return Err(EvalError::Radius(radius));
    }
    let samples = sample_polylines(polylines, SAMPLES_PER_PX);
    if samples.is_empty() {
        return Err(EvalError::NoContour);
    }
    let (w, h) = (ink.width() as i64, ink.height() as i64);
    let r2 = radius * radius;
    let hit = |p: Vec2| {
        let x0 = (floor(p.x - radius - 0.5) as i64).max(0);
        let x1 = (ceil(p.x + radius - 0.5) as i64).min(w - 1);
        let y0 = (floor(p.y - radius - 0.5) as i64).max(0);
        let y1 = (ceil(p.y + radius - 0.5) as i64).min(h - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                if ink.get(x as usize, y as usize) {
                    let d = Vec2::new(x as f64 + 0.5, y as f64 + 0.5) - p;
                    if d.dot(d) <= r2 {
                        return true;
                    }
                }
            }
        }
        false
    };
    let covered = samples.iter().filter(|&&p| hit(p)).count();
    Ok(covered as f64 / samples.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chamfer {
    /// Mean of the two directed mean distances.
    pub mean: f64,
    /// Larger of the two directed maximum distances.
    pub max: f64,
}

fn directed(from: &[Vec2], to: &SegmentIndex) -> (f64, f64) {
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for &p in from {
        let d = to.distance(p);
        sum += d;
        max = max.max(d);
    }
    (sum / from.len() as f64, max)
}

/// Symmetric chamfer distance between two polyline sets, sampled at
/// `per_px` points per pixel and measured to the other set's segments.
pub fn chamfer(a: &[Vec<Vec2>], b: &[Vec<Vec2>], per_px: f64) -> Result<Chamfer, EvalError> {
    let sa = sample_polylines(a, per_px);
    let sb = sample_polylines(b, per_px);
    if sa.is_empty() || sb.is_empty() {
        return Err(EvalError::EmptyPolylines);
    }
    let ia = SegmentIndex::new(a, 8.0);
    let ib = SegmentIndex::new(b, 8.0);
    let (m_ab, x_ab) = directed(&sa, &ib);
    let (m_ba, x_ba) = directed(&sb, &ia);
    Ok(Chamfer {
        mean: 0.5 * (m_ab + m_ba),
        max: x_ab.max(x_ba),
    })
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Straight strokes of fixed length and width centered on uniformly drawn
/// pixels of `region`, with uniform directions. A chance-level reference
/// for [`darkness_score`].
pub fn random_strokes(region: &Mask, count: usize, length: f64, width: f64, seed: u64, polarity: Polarity) -> DrawingDocument {
    let mut doc = DrawingDocument::new(region.width(), region.height(), polarity);
    let pixels: Vec<(usize, usize)> = region.iter_set().collect();
    if pixels.is_empty() {
        return doc;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let (x, y) = pixels[(unit(&mut rng) * pixels.len() as f64) as usize];
        let c = Vec2::new(x as f64 + unit(&mut rng), y as f64 + unit(&mut rng));
        let d = Vec2::from_angle(unit(&mut rng) * PI) * (0.5 * length);
        let s = Stroke::uniform(alloc::vec![c - d, c + d], width, StrokeTag::Contour).expect("finite random stroke");
        doc.strokes.extend(crate::strokes::clip_to_page(&s, doc.width as f64, doc.height as f64));
    }
    doc
}

/// Mean distance from the brightest `fraction` of covered pixels (by
/// luminance, ties broken by scan order) to the nearest polyline.
pub fn bright_pixel_distance(render: &ScalarImage, depth: &ScalarImage, polylines: &[Vec<Vec2>], fraction: f64) -> Result<f64, EvalError> {
    let mut px: Vec<(f64, usize, usize)> = Vec::new();
    for y in 0..render.height() {
        for x in 0..render.width() {
            if depth.get(x, y).is_finite() {
                px.push((render.get(x, y), x, y));
            }
        }
    }
    if px.is_empty() {
        return Err(EvalError::EmptyRender);
    }
    let index = SegmentIndex::new(polylines, 8.0);
    if index.is_empty() {
        return Err(EvalError::NoContour);
    }
    px.sort_by(|a, b| b.0.total_cmp(&a.0));
    let k = (ceil(fraction * px.len() as f64) as usize).clamp(1, px.len());
    let sum: f64 = px[..k]
        .iter()
        .map(|&(_, x, y)| index.distance(Vec2::new(x as f64 + 0.5, y as f64 + 0.5)))
        .sum();
    Ok(sum / k as f64)
}

/// Largest distance from a set pixel of either mask to the nearest set
/// pixel of the other (0 when both are empty, infinite when one is).
pub fn mask_displacement(a: &Mask, b: &Mask) -> f64 {
    fn one_way(from: &Mask, to: &Mask) -> f64 {
        let pts: Vec<(i64, i64)> = to.iter_set().map(|(x, y)| (x as i64, y as i64)).collect();
        let mut worst: f64 = 0.0;
        for (x, y) in from.iter_set() {
            let (x, y) = (x as i64, y as i64);
            let best = pts
                .iter()
                .map(|&(u, v)| ((u - x) * (u - x) + (v - y) * (v - y)) as f64)
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(crate::math::sqrt(best));
        }
        worst
    }
    one_way(a, b).max(one_way(b, a))
}
