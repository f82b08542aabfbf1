//! End-to-end drawing pipelines.
//!
//! * [`draw`]: headlight render, visible object-space contours and feature
//!   edges, suggestive strokes from render valleys, widths from the render.
//! * [`trace`]: valleys of an arbitrary image.
//! * [`hatch`]: [`draw`] plus tone hatching.
//! * [`rim`]: ring-light render, ridges found as valleys of the inverted
//!   image, drawn light on dark.

use alloc::vec::Vec;

use crate::camera::Camera;
use crate::contour::{extract_smooth_contours, ContourSet, ContourTag};
use crate::curvature::estimate_curvature;
use crate::features::{classify_edges, feature_contours, DEFAULT_CREASE_ANGLE};
use crate::hatching::{generate_hatching, project_direction_field, DirectionField, HatchError, HatchParams, Principal};
use crate::image::ScalarImage;
use crate::math::Vec2;
use crate::mesh::Mesh;
use crate::render::{render, LightingConfig, MaterialConfig, RenderError, RenderOutput};
use crate::strokes::{assign_thickness, compose, DrawingDocument, Polarity, Stroke, StrokeTag, ThicknessParams};
use crate::valleys::{detect_valleys, link_valleys, tag_valley_lines, LinkParams, TaggedPolyline, ValleyError, ValleyParams, ValleyTag};
use crate::visibility::{clip_visible, VisibilityParams};

/// A failure, tagged with the stage that produced it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("render: {0}")]
    Render(#[from] RenderError),
    #[error("valleys: {0}")]
    Valleys(#[from] ValleyError),
    #[error("hatching: {0}")]
    Hatching(#[from] HatchError),
    #[error("strokes: {0}")]
    Strokes(&'static str),
}

impl PipelineError {
    pub fn stage(&self) -> &'static str {
        match self {
            PipelineError::Render(_) => "render",
            PipelineError::Valleys(_) => "valleys",
            PipelineError::Hatching(_) => "hatching",
            PipelineError::Strokes(_) => "strokes",
        }
    }
}

/// Stroke width bounds; `None` takes the size-scaled default.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WidthParams {
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
}

impl WidthParams {
    pub fn resolve(&self, width: usize, height: usize, tau: f64) -> Result<ThicknessParams, PipelineError> {
        let mut p = ThicknessParams::for_size(width, height, tau);
        if let Some(t) = self.t_min {
            p.t_min = t;
        }
        if let Some(t) = self.t_max {
            p.t_max = t;
        }
        if !(p.t_min >= 0.0 && p.t_min <= p.t_max) || !p.t_max.is_finite() {
            return Err(PipelineError::Strokes("need 0 <= tmin <= tmax"));
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrawParams {
    pub material: MaterialConfig,
    pub lighting: LightingConfig,
    pub crease_angle: f64,
    pub visibility: VisibilityParams,
    pub valley: ValleyParams,
    pub link: LinkParams,
    /// Valley points this close to a projected contour count as contour.
    pub contour_radius: f64,
    pub widths: WidthParams,
}

impl Default for DrawParams {
    fn default() -> Self {
        DrawParams {
            material: MaterialConfig::default(),
            lighting: LightingConfig::headlight(),
            crease_angle: DEFAULT_CREASE_ANGLE,
            visibility: VisibilityParams::default(),
            valley: ValleyParams::default(),
            link: LinkParams::default(),
            contour_radius: 2.0,
            widths: WidthParams::default(),
        }
    }
}

/// Everything the draw pipeline computes, for reporting and evaluation.
#[derive(Clone, Debug)]
pub struct DrawOutput {
    pub render: RenderOutput,
    /// Visible contours, feature edges included.
    pub contours: ContourSet,
    pub projected: Vec<(ContourTag, Vec<Vec2>)>,
    pub valley_lines: Vec<TaggedPolyline>,
    pub document: DrawingDocument,
}

impl DrawOutput {
    pub fn projected_points(&self) -> Vec<Vec<Vec2>> {
        self.projected.iter().map(|(_, p)| p.clone()).collect()
    }
}

fn contour_stroke_tag(tag: ContourTag) -> StrokeTag {
    match tag {
        ContourTag::SmoothContour => StrokeTag::Contour,
        ContourTag::PolyhedralSilhouette => StrokeTag::Silhouette,
        ContourTag::Crease => StrokeTag::Crease,
    }
}

fn valley_stroke_tag(tag: ValleyTag) -> StrokeTag {
    match tag {
        ValleyTag::Contour => StrokeTag::Contour,
        ValleyTag::Suggestive => StrokeTag::Suggestive,
    }
}

/// Smooth contours plus polyhedral silhouettes and creases. Silhouette edges
/// are kept only where the shading normal is discontinuous (or at open
/// boundaries); elsewhere the smooth contour already covers them.
pub fn object_contours(mesh: &Mesh, camera: &Camera, crease_angle: f64) -> ContourSet {
    let mut set = extract_smooth_contours(mesh, camera);
    let classes = classify_edges(mesh, camera, crease_angle);
    set.extend(feature_contours(mesh, &classes, |e| e.split_normals || e.boundary));
    set
}

/// Valley lines of `image`, linked and tagged against `contours`.
pub fn valley_lines(image: &ScalarImage, contours: &[Vec<Vec2>], valley: &ValleyParams, link: &LinkParams, contour_radius: f64) -> Result<Vec<TaggedPolyline>, PipelineError> {
    let map = detect_valleys(image, valley)?;
    let lines = link_valleys(&map, link);
    Ok(tag_valley_lines(image, &lines, contours, valley.tau, contour_radius))
}

pub fn draw(mesh: &Mesh, camera: &Camera, params: &DrawParams) -> Result<DrawOutput, PipelineError> {
    let out = render(mesh, camera, &params.material, &params.lighting)?;
    let (w, h) = (camera.width(), camera.height());
    let all = object_contours(mesh, camera, params.crease_angle);
    let contours = clip_visible(&all, &out.depth, camera, &params.visibility);
    let projected = contours.project(camera);
    let contour_lines: Vec<Vec<Vec2>> = projected.iter().map(|(_, p)| p.clone()).collect();
    let valleys = valley_lines(&out.luminance, &contour_lines, &params.valley, &params.link, params.contour_radius)?;

    let mut lines: Vec<(Vec<Vec2>, StrokeTag)> = projected.iter().map(|(t, p)| (p.clone(), contour_stroke_tag(*t))).collect();
    // contour-tagged valley runs duplicate the object-space contours
    lines.extend(
        valleys
            .iter()
            .filter(|v| v.tag == ValleyTag::Suggestive)
            .map(|v| (v.points.clone(), StrokeTag::Suggestive)),
    );
    let widths = params.widths.resolve(w, h, params.valley.tau)?;
    let strokes = assign_thickness(&lines, &out.luminance, &widths);
    let document = compose(&[strokes], w, h, Polarity::DarkOnLight);
    Ok(DrawOutput {
        render: out,
        contours,
        projected,
        valley_lines: valleys,
        document,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TraceParams {
    pub valley: ValleyParams,
    pub link: LinkParams,
    pub widths: WidthParams,
}

/// Strokes along the valleys of `image` alone. Runs reaching black are
/// tagged contour, the rest suggestive.
pub fn trace_strokes(image: &ScalarImage, params: &TraceParams) -> Result<Vec<Stroke>, PipelineError> {
    let valleys = valley_lines(image, &[], &params.valley, &params.link, 0.0)?;
    let lines: Vec<(Vec<Vec2>, StrokeTag)> = valleys.into_iter().map(|v| (v.points, valley_stroke_tag(v.tag))).collect();
    let widths = params.widths.resolve(image.width(), image.height(), params.valley.tau)?;
    Ok(assign_thickness(&lines, image, &widths))
}

pub fn trace(image: &ScalarImage, params: &TraceParams) -> Result<DrawingDocument, PipelineError> {
    let strokes = trace_strokes(image, params)?;
    Ok(compose(&[strokes], image.width(), image.height(), Polarity::DarkOnLight))
}

#[derive(Clone, Debug)]
pub struct HatchOutput {
    pub draw: DrawOutput,
    pub field: DirectionField,
    pub hatches: Vec<Stroke>,
}

/// [`draw`] plus hatching along the chosen principal direction.
pub fn hatch(mesh: &Mesh, camera: &Camera, params: &DrawParams, hatch: &HatchParams, which: Principal) -> Result<HatchOutput, PipelineError> {
    hatch.validate()?;
    let mut d = draw(mesh, camera, params)?;
    let curv = estimate_curvature(mesh);
    let field = project_direction_field(mesh, camera, &curv, &d.render.gbuffer, which);
    let hatches = generate_hatching(&d.render.luminance, &field, hatch)?;
    let mut strokes = core::mem::take(&mut d.document.strokes);
    strokes.extend(hatches.iter().cloned());
    d.document = compose(&[strokes], camera.width(), camera.height(), Polarity::DarkOnLight);
    Ok(HatchOutput { draw: d, field, hatches })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RimParams {
    pub material: MaterialConfig,
    pub ring_count: u32,
    pub ring_radius: Option<f64>,
    pub trace: TraceParams,
}

impl Default for RimParams {
    fn default() -> Self {
        RimParams {
            material: MaterialConfig::default(),
            ring_count: 64,
            ring_radius: None,
            trace: TraceParams::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RimOutput {
    pub render: RenderOutput,
    pub document: DrawingDocument,
}

/// Ring-light render and its bright ridges as light strokes on black.
pub fn rim(mesh: &Mesh, camera: &Camera, params: &RimParams) -> Result<RimOutput, PipelineError> {
    let out = render(mesh, camera, &params.material, &LightingConfig::ring(params.ring_count, params.ring_radius))?;
    // ridges of the render are valleys of its complement
    let strokes = trace_strokes(&out.luminance.inverted(), &params.trace)?;
    let document = compose(&[strokes], camera.width(), camera.height(), Polarity::LightOnDark);
    Ok(RimOutput { render: out, document })
}
