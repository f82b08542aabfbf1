//! Stroke width from the width of the dark band under the stroke.

use alloc::vec::Vec;

use crate::image::ScalarImage;
use crate::math::Vec2;

use super::{Stroke, StrokeTag};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThicknessParams {
    pub t_min: f64,
    pub t_max: f64,
    /// Pixels darker than this belong to the band.
    pub tau: f64,
    /// Sampling step across the stroke, pixels.
    pub step: f64,
    /// How far to look for the band when the stroke point itself is not dark.
    pub search: f64,
    /// Per-tag width multipliers, indexed like [`StrokeTag::ALL`].
    pub multiplier: [f64; 5],
}

impl ThicknessParams {
    /// Defaults for a `width x height` image: 0.75 to 6 px at 512², scaled
    /// linearly with the smaller image side.
    pub fn for_size(width: usize, height: usize, tau: f64) -> Self {
        let s = width.min(height) as f64 / 512.0;
        ThicknessParams {
            t_min: 0.75 * s,
            t_max: 6.0 * s,
            tau,
            step: 0.25,
            search: 1.5,
            multiplier: [1.0; 5],
        }
    }

    pub fn multiplier_for(&self, tag: StrokeTag) -> f64 {
        self.multiplier[tag as usize]
    }
}

/// Unit normal of a polyline at point `i`.
fn normal_at(points: &[Vec2], i: usize) -> Vec2 {
    let n = points.len();
    let a = points[i.saturating_sub(1)];
    let b = points[(i + 1).min(n - 1)];
    let t = (b - a).normalize();
    if t.norm() > 0.0 {
        t.perp()
    } else {
        Vec2::new(0.0, 1.0)
    }
}

/// Span between the outermost samples of the connected run of dark pixels
/// (`I < tau`, nearest-pixel lookup) crossing `p` along `normal`. Samples are
/// `step` apart; the run may start up to `search` from `p`. Returns 0 when
/// no dark pixel is found. The walk stops once the span exceeds `limit`.
pub fn band_extent(render: &ScalarImage, p: Vec2, normal: Vec2, tau: f64, step: f64, search: f64, limit: f64) -> f64 {
    let dark = |s: f64| render.sample_nearest(p + normal * s).is_some_and(|v| v < tau);
    let mut start = None;
    if dark(0.0) {
        start = Some(0.0);
    } else {
        let mut k = 1;
        while k as f64 * step <= search + 1e-12 {
            let s = k as f64 * step;
            if dark(s) {
                start = Some(s);
                break;
            }
            if dark(-s) {
                start = Some(-s);
                break;
            }
            k += 1;
        }
    }
    let Some(s0) = start else {
        return 0.0;
    };
    let max_steps = (limit / step) as usize + 2;
    let mut hi = 0;
    while hi < max_steps && dark(s0 + (hi + 1) as f64 * step) {
        hi += 1;
    }
    let mut lo = 0;
    while lo + hi < max_steps && dark(s0 - (lo + 1) as f64 * step) {
        lo += 1;
    }
    (lo + hi) as f64 * step
}

/// Width per point from the dark band of `render` across the stroke,
/// scaled by the tag multiplier and clamped to `[t_min, t_max]`. Points
/// outside the image get `t_min`. Polylines with fewer than two points are
/// skipped.
pub fn assign_thickness(polylines: &[(Vec<Vec2>, StrokeTag)], render: &ScalarImage, params: &ThicknessParams) -> Vec<Stroke> {
    let mut out = Vec::with_capacity(polylines.len());
    for (points, tag) in polylines {
        if points.len() < 2 {
            continue;
        }
        let mult = params.multiplier_for(*tag);
        let thickness = (0..points.len())
            .map(|i| {
                let p = points[i];
                if render.pixel_of(p).is_none() {
                    return params.t_min;
                }
                let e = band_extent(render, p, normal_at(points, i), params.tau, params.step, params.search, params.t_max);
                (e * mult).clamp(params.t_min, params.t_max)
            })
            .collect();
        out.push(Stroke {
            points: points.clone(),
            thickness,
            tag: *tag,
        });
    }
    out
}
