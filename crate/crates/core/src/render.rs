//! Local-illumination renders of a mesh: headlight (light at the camera),
//! a single point light, or a ring of lights around the subject.
//!
//! Only direct lighting is simulated. There is no ambient term and no
//! interreflection, and luminance is clamped to `[0, 1]`.

use alloc::vec::Vec;

use crate::bvh::Bvh;
use crate::camera::Camera;
use crate::image::ScalarImage;
use crate::math::{cos, pow, sin, Vec3, PI};
use crate::mesh::Mesh;
use crate::raster::{rasterize, GBuffer};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("diffuse albedo {0} outside (0, 1]")]
    Albedo(f64),
    #[error("specular strength {0} must be >= 0")]
    SpecularStrength(f64),
    #[error("specular exponent {0} must be >= 1")]
    SpecularExponent(f64),
    #[error("ring lighting needs at least 3 lights, got {0}")]
    RingCount(u32),
    #[error("ring radius {0} must be positive")]
    RingRadius(f64),
    #[error("light position is not finite")]
    LightPosition,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialConfig {
    pub diffuse_albedo: f64,
    pub specular_strength: f64,
    pub specular_exponent: f64,
}

impl Default for MaterialConfig {
    /// Matte white.
    fn default() -> Self {
        MaterialConfig {
            diffuse_albedo: 1.0,
            specular_strength: 0.0,
            specular_exponent: 32.0,
        }
    }
}

impl MaterialConfig {
    pub fn glossy(strength: f64, exponent: f64) -> Self {
        MaterialConfig {
            specular_strength: strength,
            specular_exponent: exponent,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        if !(self.diffuse_albedo > 0.0 && self.diffuse_albedo <= 1.0) {
            return Err(RenderError::Albedo(self.diffuse_albedo));
        }
        if !(self.specular_strength >= 0.0) {
            return Err(RenderError::SpecularStrength(self.specular_strength));
        }
        if !(self.specular_exponent >= 1.0) {
            return Err(RenderError::SpecularExponent(self.specular_exponent));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LightMode {
    /// Point light at the camera center.
    Headlight,
    Point { position: Vec3 },
    /// `count` lights evenly spaced on a circle through the mesh centroid,
    /// perpendicular to the view direction. `radius: None` means ten times
    /// the bounding-box diagonal.
    Ring { count: u32, radius: Option<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LightingConfig {
    pub mode: LightMode,
    /// Shadow rays toward each light. Ignored for the headlight.
    pub shadows: bool,
    /// Background luminance; `None` picks white, or black for ring lighting.
    pub background: Option<f64>,
}

impl LightingConfig {
    pub fn headlight() -> Self {
        LightingConfig {
            mode: LightMode::Headlight,
            shadows: false,
            background: None,
        }
    }

    pub fn point(position: Vec3) -> Self {
        LightingConfig {
            mode: LightMode::Point { position },
            shadows: true,
            background: None,
        }
    }

    pub fn ring(count: u32, radius: Option<f64>) -> Self {
        LightingConfig {
            mode: LightMode::Ring { count, radius },
            shadows: false,
            background: None,
        }
    }

    pub fn background_value(&self) -> f64 {
        self.background.unwrap_or(match self.mode {
            LightMode::Ring { .. } => 0.0,
            _ => 1.0,
        })
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        match self.mode {
            LightMode::Headlight => Ok(()),
            LightMode::Point { position } => {
                if position.is_finite() {
                    Ok(())
                } else {
                    Err(RenderError::LightPosition)
                }
            }
            LightMode::Ring { count, radius } => {
                if count < 3 {
                    return Err(RenderError::RingCount(count));
                }
                match radius {
                    Some(r) if !(r > 0.0) => Err(RenderError::RingRadius(r)),
                    _ => Ok(()),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Light {
    position: Vec3,
    intensity: f64,
}

/// Ring light positions for `mesh` seen from `camera`.
pub fn ring_light_positions(mesh: &Mesh, camera: &Camera, count: u32, radius: Option<f64>) -> Vec<Vec3> {
    let center = mesh.centroid();
    let r = radius.unwrap_or(10.0 * mesh.scale());
    (0..count)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / count as f64;
            center + (camera.right() * cos(a) + camera.true_up() * sin(a)) * r
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RenderOutput {
    pub luminance: ScalarImage,
    pub depth: ScalarImage,
    pub gbuffer: GBuffer,
}

/// Renders luminance and depth. Background pixels get the lighting's
/// background value and `+inf` depth.
pub fn render(mesh: &Mesh, camera: &Camera, material: &MaterialConfig, lighting: &LightingConfig) -> Result<RenderOutput, RenderError> {
    material.validate()?;
    lighting.validate()?;
    let gbuffer = rasterize(mesh, camera);
    let (w, h) = (camera.width(), camera.height());
    let c = camera.center();

    let lights: Vec<Light> = match lighting.mode {
        LightMode::Headlight => Vec::new(),
        LightMode::Point { position } => alloc::vec![Light { position, intensity: 1.0 }],
        LightMode::Ring { count, radius } => {
            // a continuous ring integrates max(0, cos) to 1/π
            let intensity = PI / count as f64;
            ring_light_positions(mesh, camera, count, radius)
                .into_iter()
                .map(|position| Light { position, intensity })
                .collect()
        }
    };
    let bvh = (lighting.shadows && !lights.is_empty()).then(|| Bvh::build(mesh));
    let eps = 1e-4 * mesh.scale();

    let background = lighting.background_value();
    let mut lum = ScalarImage::new(w, h, background);
    for y in 0..h {
        for x in 0..w {
            let Some((f, b)) = gbuffer.fragment(x, y) else {
                continue;
            };
            let n = mesh.interpolated_normal(f, b);
            let p = mesh.interpolated_position(f, b);
            let Some(view) = (c - p).try_normalize() else {
                lum.set(x, y, 0.0);
                continue;
            };
            let value = match lighting.mode {
                LightMode::Headlight => shade(material, n, view, view),
                _ => {
                    let geo = mesh.face_normal(f);
                    let mut sum = 0.0;
                    for light in &lights {
                        let to_light = light.position - p;
                        let dist = to_light.norm();
                        if !(dist > eps) {
                            continue;
                        }
                        let l = to_light / dist;
                        if n.dot(l) <= 0.0 {
                            continue;
                        }
                        if let Some(bvh) = &bvh {
                            let side = if geo.dot(l) >= 0.0 { 1.0 } else { -1.0 };
                            let origin = p + geo * (side * eps);
                            if bvh.occluded(origin, l, eps, dist - eps) {
                                continue;
                            }
                        }
                        sum += light.intensity * shade(material, n, l, view);
                    }
                    sum
                }
            };
            lum.set(x, y, value.clamp(0.0, 1.0));
        }
    }
    Ok(RenderOutput {
        luminance: lum,
        depth: gbuffer.depth.clone(),
        gbuffer,
    })
}

/// Lambert plus a Blinn half-vector lobe for one light direction.
fn shade(material: &MaterialConfig, n: Vec3, l: Vec3, v: Vec3) -> f64 {
    let ndl = n.dot(l);
    if ndl <= 0.0 {
        return 0.0;
    }
    let mut out = material.diffuse_albedo * ndl;
    if material.specular_strength > 0.0 {
        let h = (l + v).normalize();
        let ndh = n.dot(h);
        if ndh > 0.0 {
            out += material.specular_strength * pow(ndh, material.specular_exponent);
        }
    }
    out
}

/// View depth per pixel, `+inf` where nothing is visible.
pub fn render_depth_only(mesh: &Mesh, camera: &Camera) -> ScalarImage {
    rasterize(mesh, camera).depth
}
