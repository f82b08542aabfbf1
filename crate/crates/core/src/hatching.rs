//! Tone hatching along projected principal curvature directions.
//!
//! Tone is quantized to three bands: blank where `I >= t1`, one family of
//! hatches where `t2 <= I < t1`, and a perpendicular second family where
//! `I < t2`. Each family is a set of evenly spaced streamlines of the image
//! direction field.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::camera::Camera;
use crate::curvature::CurvatureField;
use crate::image::{Mask, ScalarImage};
use crate::math::{atan2, cos, line_angle, sin, Vec2, Vec3, PI};
use crate::mesh::Mesh;
use crate::raster::GBuffer;
use crate::spatial::PointIndex;
use crate::strokes::{Stroke, StrokeTag};

/// Diffusion passes used to fill pixels without a usable direction.
pub const DIFFUSION_ITERATIONS: usize = 10;

/// Which principal direction the hatches follow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Principal {
    /// Direction of maximum curvature.
    #[default]
    Max,
    Min,
}

impl Principal {
    pub fn name(self) -> &'static str {
        match self {
            Principal::Max => "d1",
            Principal::Min => "d2",
        }
    }

    pub fn from_name(s: &str) -> Option<Principal> {
        match s {
            "d1" => Some(Principal::Max),
            "d2" => Some(Principal::Min),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HatchError {
    #[error("spacing must be at least 2 px, got {0}")]
    Spacing(f64),
    #[error("levels must be 1 or 2, got {0}")]
    Levels(u8),
    #[error("tone thresholds need 0 < t2 < t1 < 1, got t1 = {t1}, t2 = {t2}")]
    Thresholds { t1: f64, t2: f64 },
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("max_len must be positive, got {0}")]
    MaxLen(f64),
    #[error("thickness must be positive and finite, got {0}")]
    Thickness(f64),
    #[error("render is {render:?} but direction field is {field:?}")]
    SizeMismatch { render: (usize, usize), field: (usize, usize) },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HatchParams {
    /// Distance between neighboring hatches of one family, pixels.
    pub spacing: f64,
    /// 1 for single hatching, 2 to add cross-hatching.
    pub levels: u8,
    pub t1: f64,
    pub t2: f64,
    /// Streamline integration step, pixels.
    pub step: f64,
    pub max_len: f64,
    pub seed: u64,
    /// Stroke width; derived from the thresholds when `None`.
    pub thickness: Option<f64>,
}

impl Default for HatchParams {
    fn default() -> Self {
        HatchParams {
            spacing: 4.0,
            levels: 2,
            t1: 0.5,
            t2: 0.25,
            step: 1.0,
            max_len: 50.0,
            seed: 0,
            thickness: None,
        }
    }
}

impl HatchParams {
    pub fn validate(&self) -> Result<(), HatchError> {
        if !(self.spacing >= 2.0) || !self.spacing.is_finite() {
            return Err(HatchError::Spacing(self.spacing));
        }
        if !matches!(self.levels, 1 | 2) {
            return Err(HatchError::Levels(self.levels));
        }
        if !(0.0 < self.t2 && self.t2 < self.t1 && self.t1 < 1.0) {
            return Err(HatchError::Thresholds { t1: self.t1, t2: self.t2 });
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(HatchError::Step(self.step));
        }
        if !(self.max_len > 0.0) {
            return Err(HatchError::MaxLen(self.max_len));
        }
        if let Some(t) = self.thickness {
            if !(t > 0.0) || !t.is_finite() {
                return Err(HatchError::Thickness(t));
            }
        }
        Ok(())
    }

    /// Stroke width. By default the ink fraction `w / spacing` of the single
    /// band matches the band's mid tone; the cross-hatched band then comes
    /// out near the mid tone of `[0, t2]`.
    pub fn stroke_width(&self) -> f64 {
        self.thickness.unwrap_or_else(|| {
            let target = if self.levels == 2 { 0.5 * (self.t1 + self.t2) } else { 0.5 * self.t1 };
            self.spacing * (1.0 - target)
        })
    }

    /// Same-level points closer than this stop a streamline.
    pub fn test_distance(&self) -> f64 {
        0.5 * self.spacing + self.step
    }
}

/// Per-pixel image-plane hatch orientation over the covered region.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionField {
    /// Line angle in `[0, π)`; 0 outside the mask.
    pub orientation: ScalarImage,
    /// Covered pixels.
    pub mask: Mask,
    /// Pixels whose direction came from the diffusion fill.
    pub flagged: Mask,
}

impl DirectionField {
    pub fn width(&self) -> usize {
        self.orientation.width()
    }

    pub fn height(&self) -> usize {
        self.orientation.height()
    }
}

/// Screen direction of the chosen principal direction at one pixel, or
/// `None` when it is unusable (umbilic corner, or nearly along the view ray).
fn pixel_direction(mesh: &Mesh, camera: &Camera, curv: &CurvatureField, which: Principal, f: usize, b: [f64; 3]) -> Option<f64> {
    let dirs = match which {
        Principal::Max => &curv.d1,
        Principal::Min => &curv.d2,
    };
    let tri = mesh.faces()[f];
    let mut d = Vec3::ZERO;
    let mut reference: Option<Vec3> = None;
    for (k, &v) in tri.iter().enumerate() {
        let flags = curv.flags[v as usize];
        if flags.umbilic || flags.insufficient {
            return None;
        }
        let dv = dirs[v as usize];
        // principal directions are sign-free; align corners before blending
        let dv = match reference {
            Some(r) if r.dot(dv) < 0.0 => -dv,
            _ => dv,
        };
        reference.get_or_insert(dv);
        d += dv * b[k];
    }
    let p = mesh.interpolated_position(f, b);
    let n = mesh.interpolated_normal(f, b);
    let t = (d - n * n.dot(d)).try_normalize()?;
    let img = camera.project_direction(p, t)?;
    let z = camera.to_view(p).z;
    // a unit tangent across the view ray projects to about focal / z pixels
    if img.norm() < 0.1 * camera.focal() / z {
        return None;
    }
    Some(line_angle(img.x, img.y))
}

/// Projects per-vertex principal directions to the image at each covered
/// pixel. Unusable pixels are filled by averaging doubled-angle vectors of
/// already known 8-neighbors, for at most [`DIFFUSION_ITERATIONS`] passes;
/// whatever remains takes the mean direction of the known pixels (or 0 if
/// there are none).
pub fn project_direction_field(mesh: &Mesh, camera: &Camera, curv: &CurvatureField, gbuffer: &GBuffer, which: Principal) -> DirectionField {
    let (w, h) = (gbuffer.width(), gbuffer.height());
    let mask = gbuffer.coverage();
    let mut orientation = ScalarImage::new(w, h, 0.0);
    let mut known = Mask::new(w, h);
    let mut flagged = Mask::new(w, h);
    for (x, y) in mask.iter_set() {
        let (f, b) = gbuffer.fragment(x, y).unwrap();
        match pixel_direction(mesh, camera, curv, which, f, b) {
            Some(a) => {
                orientation.set(x, y, a);
                known.set(x, y, true);
            }
            None => flagged.set(x, y, true),
        }
    }
    diffuse(&mut orientation, &mut known, &flagged);
    DirectionField {
        orientation,
        mask,
        flagged,
    }
}

fn doubled(a: f64) -> Vec2 {
    Vec2::new(cos(2.0 * a), sin(2.0 * a))
}

fn undoubled(v: Vec2) -> f64 {
    let a = 0.5 * atan2(v.y, v.x);
    if a < 0.0 {
        a + PI
    } else {
        a
    }
}

fn diffuse(orientation: &mut ScalarImage, known: &mut Mask, flagged: &Mask) {
    let (w, h) = (orientation.width(), orientation.height());
    let mut pending: Vec<(usize, usize)> = flagged.iter_set().collect();
    for _ in 0..DIFFUSION_ITERATIONS {
        if pending.is_empty() {
            break;
        }
        let mut updates = Vec::new();
        pending.retain(|&(x, y)| {
            let mut sum = Vec2::ZERO;
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    if known.get(nx, ny) {
                        sum = sum + doubled(orientation.get(nx, ny));
                    }
                }
            }
            if sum.norm() > 1e-12 {
                updates.push((x, y, undoubled(sum)));
                false
            } else {
                true
            }
        });
        if updates.is_empty() {
            break;
        }
        for (x, y, a) in updates {
            orientation.set(x, y, a);
            known.set(x, y, true);
        }
    }
    if pending.is_empty() {
        return;
    }
    let mean = known
        .iter_set()
        .fold(Vec2::ZERO, |s, (x, y)| s + doubled(orientation.get(x, y)));
    let fill = if mean.norm() > 1e-12 { undoubled(mean) } else { 0.0 };
    for (x, y) in pending {
        orientation.set(x, y, fill);
        known.set(x, y, true);
    }
}

/// Uniform `[0, 1)` from the top 53 bits.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

struct Level<'a> {
    render: &'a ScalarImage,
    field: &'a DirectionField,
    threshold: f64,
    /// Added to the field orientation (0 or π/2).
    rotation: f64,
}

impl Level<'_> {
    fn inside(&self, p: Vec2) -> bool {
        match self.render.pixel_of(p) {
            Some((x, y)) => self.field.mask.get(x, y) && self.render.get(x, y) < self.threshold,
            None => false,
        }
    }

    /// Unit field direction at `p`, oriented to agree with `heading`.
    fn direction(&self, p: Vec2, heading: Vec2) -> Option<Vec2> {
        let (x, y) = self.render.pixel_of(p)?;
        let d = Vec2::from_angle(self.field.orientation.get(x, y) + self.rotation);
        Some(if d.dot(heading) < 0.0 { -d } else { d })
    }
}

/// Streamline through `seed` in both directions.
fn trace(level: &Level, seed: Vec2, occupied: &PointIndex, owner: u32, params: &HatchParams) -> Vec<Vec2> {
    let Some(d0) = level.direction(seed, Vec2::new(1.0, 0.0)) else {
        return Vec::new();
    };
    let radius = params.test_distance();
    let mut halves: [Vec<Vec2>; 2] = [Vec::new(), Vec::new()];
    let mut length = 0.0;
    for (half, start) in halves.iter_mut().zip([d0, -d0]) {
        let mut p = seed;
        let mut heading = start;
        while length + params.step <= params.max_len {
            // midpoint rule
            let Some(k1) = level.direction(p, heading) else { break };
            let mid = p + k1 * (0.5 * params.step);
            let Some(k2) = level.direction(mid, k1) else { break };
            let q = p + k2 * params.step;
            if !level.inside(q) || occupied.any_within(q, radius, Some(owner)) {
                break;
            }
            half.push(q);
            length += params.step;
            heading = k2;
            p = q;
        }
    }
    let [fwd, back] = halves;
    let mut pts: Vec<Vec2> = back.into_iter().rev().collect();
    pts.push(seed);
    pts.extend(fwd);
    pts
}

fn hatch_level(level: &Level, params: &HatchParams, seed: u64, width: f64, out: &mut Vec<Stroke>) {
    let (w, h) = (level.render.width() as f64, level.render.height() as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = params.spacing;
    let mut grid = Vec::new();
    let (gx, gy) = ((w / s) as usize + 1, (h / s) as usize + 1);
    for j in 0..gy {
        for i in 0..gx {
            let (u, v) = (unit(&mut rng), unit(&mut rng));
            grid.push(Vec2::new((i as f64 + u) * s, (j as f64 + v) * s));
        }
    }
    let mut occupied = PointIndex::new(w, h, 0.5 * s);
    let mut queue: VecDeque<Vec2> = VecDeque::new();
    let mut grid_iter = grid.into_iter();
    let seed_radius = 0.9 * s;
    let mut owner = 0u32;
    while let Some(p) = queue.pop_front().or_else(|| grid_iter.next()) {
        if !level.inside(p) || occupied.any_within(p, seed_radius, None) {
            continue;
        }
        let pts = trace(level, p, &occupied, owner, params);
        if pts.len() < 2 {
            continue;
        }
        for &q in &pts {
            occupied.insert(q, owner);
        }
        // candidate neighbors one spacing to either side
        for i in 0..pts.len() {
            let a = pts[i.saturating_sub(1)];
            let b = pts[(i + 1).min(pts.len() - 1)];
            let n = (b - a).normalize().perp();
            queue.push_back(pts[i] + n * s);
            queue.push_back(pts[i] - n * s);
        }
        out.push(Stroke::uniform(pts, width, StrokeTag::Hatch).expect("finite hatch stroke"));
        owner += 1;
    }
}

/// Hatch strokes for a render and an aligned direction field. Deterministic
/// for a fixed seed: each level draws its seeds from its own stream.
pub fn generate_hatching(render: &ScalarImage, field: &DirectionField, params: &HatchParams) -> Result<Vec<Stroke>, HatchError> {
    params.validate()?;
    if (render.width(), render.height()) != (field.width(), field.height()) {
        return Err(HatchError::SizeMismatch {
            render: (render.width(), render.height()),
            field: (field.width(), field.height()),
        });
    }
    let width = params.stroke_width();
    let mut out = Vec::new();
    let mut levels = alloc::vec![(params.t1, 0.0)];
    if params.levels == 2 {
        levels.push((params.t2, 0.5 * PI));
    }
    for (k, (threshold, rotation)) in levels.into_iter().enumerate() {
        let level = Level {
            render,
            field,
            threshold,
            rotation,
        };
        hatch_level(&level, params, params.seed.wrapping_add(k as u64), width, &mut out);
    }
    Ok(out)
}
