//! Depth-buffer visibility of contour polylines.

use alloc::vec::Vec;

use crate::camera::Camera;
use crate::contour::{ContourPolyline, ContourSet};
use crate::image::ScalarImage;
use crate::math::{ceil, Vec3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VisibilityParams {
    /// Depth tolerance; `None` uses 1e-3 of the finite depth range.
    pub bias: Option<f64>,
    /// Samples per pixel of projected length.
    pub samples_per_px: f64,
    /// Keep hidden runs (flagged `hidden`) instead of dropping them.
    pub keep_hidden: bool,
    /// Visible pieces cut off by a transition and shorter than this
    /// (projected pixels) are treated as hidden. Such slivers appear where a
    /// hidden edge meets a visible vertex.
    pub min_visible_px: f64,
}

impl Default for VisibilityParams {
    fn default() -> Self {
        VisibilityParams {
            bias: None,
            samples_per_px: 4.0,
            keep_hidden: false,
            min_visible_px: 2.0,
        }
    }
}

pub fn default_bias(depth: &ScalarImage) -> f64 {
    match depth.finite_range() {
        Some((lo, hi)) if hi > lo => 1e-3 * (hi - lo),
        Some((lo, _)) => 1e-3 * lo.abs().max(1e-9),
        None => 0.0,
    }
}

/// A point is visible when it projects into the image and is no deeper than
/// the farthest buffered depth in its 3x3 pixel neighborhood plus `bias`.
///
/// Contours lie on depth discontinuities, where the pixel under a point may
/// show the occluding surface or the background; the neighborhood maximum
/// accepts either side.
pub fn is_visible(p: Vec3, depth: &ScalarImage, camera: &Camera, bias: f64) -> bool {
    let Some((px, z)) = camera.project(p) else {
        return false;
    };
    let Some((x, y)) = depth.pixel_of(px) else {
        return false;
    };
    let mut max = f64::NEG_INFINITY;
    for yy in y.saturating_sub(1)..=(y + 1).min(depth.height() - 1) {
        for xx in x.saturating_sub(1)..=(x + 1).min(depth.width() - 1) {
            max = max.max(depth.get(xx, yy));
        }
    }
    z <= max + bias
}

/// Splits each polyline at visibility transitions found by dense sampling.
pub fn clip_visible(set: &ContourSet, depth: &ScalarImage, camera: &Camera, params: &VisibilityParams) -> ContourSet {
    let bias = params.bias.unwrap_or_else(|| default_bias(depth));
    let mut out = ContourSet {
        polylines: Vec::new(),
        non_manifold_warnings: set.non_manifold_warnings,
        dropped_crossings: set.dropped_crossings,
    };
    for pl in &set.polylines {
        for run in split_polyline(pl, depth, camera, bias, params) {
            if !run.hidden || params.keep_hidden {
                out.polylines.push(run);
            }
        }
    }
    out
}

struct Sample {
    p: Vec3,
    visible: bool,
    vertex: bool,
}

fn projected_length(points: &[Vec3], camera: &Camera) -> f64 {
    points
        .windows(2)
        .map(|w| match (camera.project(w[0]), camera.project(w[1])) {
            (Some((a, _)), Some((b, _))) => a.distance(b),
            _ => f64::INFINITY,
        })
        .sum()
}

fn split_polyline(pl: &ContourPolyline, depth: &ScalarImage, camera: &Camera, bias: f64, params: &VisibilityParams) -> Vec<ContourPolyline> {
    let density = params.samples_per_px;
    let n = pl.points.len();
    if n < 2 {
        return Vec::new();
    }
    let closed = pl.closed && n > 2;
    let vis = |p: Vec3| is_visible(p, depth, camera, bias);
    let mut samples: Vec<Sample> = Vec::new();
    for (a, b) in pl.segments() {
        let len_px = match (camera.project(a), camera.project(b)) {
            (Some((pa, _)), Some((pb, _))) => pa.distance(pb),
            _ => 1.0,
        };
        let k = ceil(len_px * density).clamp(1.0, 1e6) as usize;
        samples.push(Sample {
            p: a,
            visible: vis(a),
            vertex: true,
        });
        for j in 1..k {
            let p = a.lerp(b, j as f64 / k as f64);
            samples.push(Sample {
                p,
                visible: vis(p),
                vertex: false,
            });
        }
    }
    if !closed {
        let last = pl.points[n - 1];
        samples.push(Sample {
            p: last,
            visible: vis(last),
            vertex: true,
        });
    }

    let transition = (1..samples.len()).find(|&i| samples[i].visible != samples[i - 1].visible);
    let Some(first_change) = transition else {
        let hidden = !samples[0].visible;
        return alloc::vec![ContourPolyline {
            tag: pl.tag,
            points: pl.points.clone(),
            closed: pl.closed,
            hidden: pl.hidden || hidden,
        }];
    };
    if closed {
        // start at a transition so no run wraps around the seam
        samples.rotate_left(first_change);
        let head = Sample {
            p: samples[0].p,
            visible: samples[0].visible,
            vertex: samples[0].vertex,
        };
        samples.push(head);
    }

    let mut runs = Vec::new();
    let mut current: Vec<Vec3> = alloc::vec![samples[0].p];
    let mut state = samples[0].visible;
    let last = samples.len() - 1;
    for i in 1..samples.len() {
        let s = &samples[i];
        if s.visible != state {
            let mid = samples[i - 1].p.lerp(s.p, 0.5);
            current.push(mid);
            runs.push((state, core::mem::take(&mut current)));
            current.push(mid);
            state = s.visible;
        }
        if s.vertex || i == last {
            current.push(s.p);
        }
    }
    runs.push((state, current));
    runs.into_iter()
        .filter(|(_, pts)| pts.len() >= 2)
        .map(|(visible, pts)| {
            let points = dedup(pts);
            let sliver = visible && projected_length(&points, camera) < params.min_visible_px;
            ContourPolyline {
                tag: pl.tag,
                points,
                closed: false,
                hidden: pl.hidden || !visible || sliver,
            }
        })
        .filter(|p| p.points.len() >= 2)
        .collect()
}

fn dedup(mut pts: Vec<Vec3>) -> Vec<Vec3> {
    pts.dedup_by(|a, b| (*a - *b).norm_sq() == 0.0);
    pts
}
