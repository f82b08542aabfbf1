//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage errors and missing inputs, 1 when
//! a pipeline stage fails. Failures print `error [<stage>]: <message>`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use linedraw_core::camera::Camera;
use linedraw_core::eval::{chamfer, coverage_of, darkness_from_mask, ink_mask, SAMPLES_PER_PX};
use linedraw_core::features::DEFAULT_CREASE_ANGLE;
use linedraw_core::hatching::{HatchParams, Principal};
use linedraw_core::image::{Mask, ScalarImage};
use linedraw_core::math::{Vec2, Vec3};
use linedraw_core::mesh::Mesh;
use linedraw_core::pipeline::{self, DrawParams, PipelineError, RimParams, TraceParams, WidthParams};
use linedraw_core::render::{render, LightMode, LightingConfig, MaterialConfig};
use linedraw_core::shapes;
use linedraw_core::strokes::{compose, rasterize_drawing, DrawingDocument, Polarity, Stroke, StrokeTag};
use linedraw_core::valleys::{detect_valleys, LinkParams, ValleyParams};
use linedraw_core::visibility::{clip_visible, VisibilityParams};

use crate::formats::{overlay, parse_drawing, valley_map_pgms, write_contours, write_drawing, Report};
use crate::imageio::{decode_image, encode_pgm16, encode_png};
use crate::manifest::{FileHash, Manifest};
use crate::obj::{parse_obj, write_obj};
use crate::svg::to_svg;

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Input(String),
    /// Exit code 1, tagged with the failing stage.
    Stage { stage: &'static str, msg: String },
}

impl CliError {
    fn stage(stage: &'static str, e: impl std::fmt::Display) -> CliError {
        CliError::Stage { stage, msg: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Stage { .. } => 1,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> CliError {
        let msg = match &e {
            PipelineError::Render(inner) => inner.to_string(),
            PipelineError::Valleys(inner) => inner.to_string(),
            PipelineError::Hatching(inner) => inner.to_string(),
            PipelineError::Strokes(inner) => inner.to_string(),
        };
        CliError::Stage { stage: e.stage(), msg }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error [input]: {m}"),
            CliError::Stage { stage, msg } => write!(f, "error [{stage}]: {msg}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn parse_vec3(s: &str) -> std::result::Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut v = [0.0f64; 3];
    for (o, p) in v.iter_mut().zip(&parts) {
        *o = p.trim().parse().map_err(|_| format!("bad number {p:?}"))?;
        if !o.is_finite() {
            return Err(format!("non-finite number {p:?}"));
        }
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

/// `headlight`, `point:x,y,z` or `ring:n[,radius]`.
fn parse_light(s: &str) -> std::result::Result<LightMode, String> {
    if s == "headlight" {
        return Ok(LightMode::Headlight);
    }
    if let Some(rest) = s.strip_prefix("point:") {
        return Ok(LightMode::Point { position: parse_vec3(rest)? });
    }
    if let Some(rest) = s.strip_prefix("ring:") {
        let mut it = rest.split(',');
        let count: u32 = it
            .next()
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| format!("bad ring light count in {s:?}"))?;
        let radius = match it.next() {
            Some(r) => Some(r.trim().parse::<f64>().map_err(|_| format!("bad ring radius in {s:?}"))?),
            None => None,
        };
        if it.next().is_some() {
            return Err(format!("expected ring:n[,radius], got {s:?}"));
        }
        return Ok(LightMode::Ring { count, radius });
    }
    Err(format!("expected headlight, point:x,y,z or ring:n[,r], got {s:?}"))
}

fn light_name(mode: &LightMode) -> String {
    match mode {
        LightMode::Headlight => "headlight".into(),
        LightMode::Point { position: p } => format!("point:{},{},{}", p.x, p.y, p.z),
        LightMode::Ring { count, radius: Some(r) } => format!("ring:{count},{r}"),
        LightMode::Ring { count, radius: None } => format!("ring:{count}"),
    }
}

#[derive(Parser, Debug)]
#[command(name = "linedraw", version, about = "Line drawings of meshes and images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a built-in test mesh as OBJ.
    Mesh(MeshArgs),
    /// Shaded render of a mesh.
    Render(RenderArgs),
    /// Visible contours and feature edges as text polylines.
    Contours(ContoursArgs),
    /// Contours and suggestive strokes of a headlight render.
    Draw(DrawArgs),
    /// Valley strokes of an image.
    Trace(TraceArgs),
    /// Draw plus tone hatching along principal curvature directions.
    Hatch(HatchArgs),
    /// Ring-light render and its bright ridges, light on dark.
    Rim(RimArgs),
    /// Metrics of a drawing against a headlight render.
    Eval(EvalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Shape {
    Sphere,
    Torus,
    Cylinder,
    Cube,
    Square,
}

#[derive(Args, Debug)]
struct MeshArgs {
    #[arg(long, value_enum)]
    shape: Shape,
    /// Resolution level (sphere subdivisions; other shapes scale with it).
    #[arg(long, default_value_t = 4)]
    detail: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SceneArgs {
    /// OBJ mesh.
    #[arg(long)]
    mesh: PathBuf,
    /// Camera position x,y,z.
    #[arg(long, value_parser = parse_vec3)]
    camera: Vec3,
    /// Look-at point; defaults to the mesh centroid.
    #[arg(long, value_parser = parse_vec3)]
    lookat: Option<Vec3>,
    /// Vertical field of view, degrees.
    #[arg(long, default_value_t = 30.0)]
    fov: f64,
    #[arg(long, default_value_t = 512)]
    width: usize,
    #[arg(long, default_value_t = 512)]
    height: usize,
}

#[derive(Args, Debug)]
struct MaterialArgs {
    /// Specular strength (0 = matte).
    #[arg(long, default_value_t = 0.0)]
    specular: f64,
    /// Specular exponent.
    #[arg(long, default_value_t = 32.0)]
    exponent: f64,
}

impl MaterialArgs {
    fn config(&self) -> MaterialConfig {
        MaterialConfig {
            specular_strength: self.specular,
            specular_exponent: self.exponent,
            ..Default::default()
        }
    }
}

#[derive(Args, Debug)]
struct ValleyArgs {
    /// Luminance threshold for valley points.
    #[arg(long, default_value_t = 0.25)]
    tau: f64,
    /// Gaussian scale of the valley detector, pixels.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.002)]
    min_strength: f64,
    /// Minimum stroke width, pixels (default scales with image size).
    #[arg(long)]
    tmin: Option<f64>,
    /// Maximum stroke width, pixels (default scales with image size).
    #[arg(long)]
    tmax: Option<f64>,
}

impl ValleyArgs {
    fn valley(&self) -> ValleyParams {
        ValleyParams {
            sigma: self.sigma,
            tau: self.tau,
            min_strength: self.min_strength,
        }
    }

    fn widths(&self) -> WidthParams {
        WidthParams {
            t_min: self.tmin,
            t_max: self.tmax,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output path stem; extensions are added per file.
    #[arg(long)]
    out: PathBuf,
    /// Supersampling of the PNG raster (1, 2 or 4).
    #[arg(long, default_value_t = 2)]
    supersample: usize,
    /// Also write the reference render as <out>.render.png.
    #[arg(long)]
    save_render: bool,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    material: MaterialArgs,
    #[arg(long, default_value = "headlight", value_parser = parse_light)]
    light: LightMode,
    /// Cast shadows from point and ring lights.
    #[arg(long)]
    shadows: bool,
    /// Output path stem (<out>.png, <out>.depth.pgm).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ContoursArgs {
    #[command(flatten)]
    scene: SceneArgs,
    #[arg(long, default_value_t = DEFAULT_CREASE_ANGLE)]
    crease_angle: f64,
    /// Keep hidden pieces (flagged hidden in the output).
    #[arg(long)]
    hidden: bool,
    /// Also write <out>.png: visible contours over the headlight render.
    #[arg(long)]
    overlay: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DrawArgs {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    material: MaterialArgs,
    #[command(flatten)]
    valley: ValleyArgs,
    #[arg(long, default_value = "headlight", value_parser = parse_light)]
    light: LightMode,
    #[arg(long)]
    shadows: bool,
    #[arg(long, default_value_t = DEFAULT_CREASE_ANGLE)]
    crease_angle: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// PNG or PGM image.
    #[arg(long)]
    image: PathBuf,
    #[command(flatten)]
    valley: ValleyArgs,
    /// Also write the valley map as <out>.strength.pgm, .orientation.pgm, .mask.pgm.
    #[arg(long)]
    valley_maps: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 2)]
    supersample: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Direction {
    D1,
    D2,
}

#[derive(Args, Debug)]
struct HatchArgs {
    #[command(flatten)]
    draw: DrawArgs,
    /// Distance between hatches, pixels.
    #[arg(long, default_value_t = 4.0)]
    spacing: f64,
    /// Hatch where luminance is below t1.
    #[arg(long, default_value_t = 0.5)]
    t1: f64,
    /// Cross-hatch where luminance is below t2 (with --cross).
    #[arg(long, default_value_t = 0.25)]
    t2: f64,
    /// Add the perpendicular second hatch family.
    #[arg(long)]
    cross: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, default_value_t = 50.0)]
    max_len: f64,
    /// Hatch width, pixels (default matches the band tones).
    #[arg(long)]
    hatch_width: Option<f64>,
    /// Principal direction followed by the hatches.
    #[arg(long, value_enum, default_value = "d1")]
    direction: Direction,
}

#[derive(Args, Debug)]
struct RimArgs {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    material: MaterialArgs,
    #[command(flatten)]
    valley: ValleyArgs,
    /// Number of lights on the ring.
    #[arg(long, default_value_t = 64)]
    ring_count: u32,
    /// Ring radius (default: ten bounding-box diagonals).
    #[arg(long)]
    ring_radius: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReportFormat {
    Kv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PolarityArg {
    DarkOnLight,
    LightOnDark,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Drawing: a .strokes file, or a PNG/PGM raster.
    #[arg(long)]
    drawing: PathBuf,
    /// Ink polarity of a raster drawing.
    #[arg(long, value_enum, default_value = "dark-on-light")]
    polarity: PolarityArg,
    #[command(flatten)]
    scene: SceneArgs,
    /// Coverage radius, pixels.
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.25)]
    tau: f64,
    #[arg(long, value_enum, default_value = "kv")]
    format: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

struct Run {
    manifest: Manifest,
}

impl Run {
    fn new(command: &str, argv: Vec<String>) -> Run {
        Run {
            manifest: Manifest::new(command, argv, json!({})),
        }
    }

    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        if !path.is_file() {
            return Err(CliError::Input(format!("{}: no such file", path.display())));
        }
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        self.manifest.inputs.push(FileHash::of(path, &bytes));
        Ok(bytes)
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        std::fs::write(path, bytes).map_err(|e| CliError::stage("write", format!("{}: {e}", path.display())))?;
        self.manifest.outputs.push(FileHash::of(path, bytes));
        Ok(())
    }

    fn finish(self, stem: &Path) -> Result<()> {
        let path = with_ext(stem, "manifest");
        std::fs::write(&path, self.manifest.to_json()).map_err(|e| CliError::stage("write", format!("{}: {e}", path.display())))
    }
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn load_mesh(run: &mut Run, path: &Path) -> Result<Mesh> {
    let bytes = run.read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::stage("mesh", format!("{}: not UTF-8 text", path.display())))?;
    parse_obj(&text).map_err(|e| CliError::stage("mesh", format!("{}: {e}", path.display())))
}

fn load_image(run: &mut Run, path: &Path) -> Result<ScalarImage> {
    let bytes = run.read(path)?;
    decode_image(&bytes).map_err(|e| CliError::stage("image", format!("{}: {e}", path.display())))
}

fn camera(scene: &SceneArgs, mesh: &Mesh) -> Result<Camera> {
    let look = scene.lookat.unwrap_or_else(|| mesh.centroid());
    Camera::looking_at(scene.camera, look, scene.fov, scene.width, scene.height).map_err(|e| CliError::stage("camera", e))
}

fn scene_json(scene: &SceneArgs, cam: &Camera) -> serde_json::Value {
    let c = cam.look_at();
    json!({
        "mesh": scene.mesh.display().to_string(),
        "camera": [scene.camera.x, scene.camera.y, scene.camera.z],
        "lookat": [c.x, c.y, c.z],
        "fov": scene.fov,
        "width": scene.width,
        "height": scene.height,
    })
}

fn material_json(m: &MaterialConfig) -> serde_json::Value {
    json!({"albedo": m.diffuse_albedo, "specular": m.specular_strength, "exponent": m.specular_exponent})
}

fn valley_json(v: &ValleyParams, link: &LinkParams, widths: &WidthParams, w: usize, h: usize) -> Result<serde_json::Value> {
    let t = widths.resolve(w, h, v.tau).map_err(|e| CliError::from(e))?;
    Ok(json!({
        "sigma": v.sigma, "tau": v.tau, "min_strength": v.min_strength,
        "min_length": link.min_length, "merge_radius": link.merge_radius, "max_turn": link.max_turn,
        "tmin": t.t_min, "tmax": t.t_max,
    }))
}

fn check_supersample(s: usize) -> Result<()> {
    if matches!(s, 1 | 2 | 4) {
        Ok(())
    } else {
        Err(CliError::Input(format!("--supersample must be 1, 2 or 4, got {s}")))
    }
}

/// Writes `<out>.svg`, `<out>.png` and `<out>.strokes`.
fn write_drawing_files(run: &mut Run, stem: &Path, doc: &DrawingDocument, supersample: usize) -> Result<()> {
    run.write(&with_ext(stem, "svg"), to_svg(doc).as_bytes())?;
    let raster = rasterize_drawing(doc, supersample).map_err(|e| CliError::stage("raster", e))?;
    let png = encode_png(&raster).map_err(|e| CliError::stage("write", e))?;
    run.write(&with_ext(stem, "png"), &png)?;
    run.write(&with_ext(stem, "strokes"), write_drawing(doc).as_bytes())
}

fn save_render(run: &mut Run, stem: &Path, img: &ScalarImage) -> Result<()> {
    let png = encode_png(img).map_err(|e| CliError::stage("write", e))?;
    run.write(&with_ext(stem, "render.png"), &png)
}

fn tag_counts_json(doc: &DrawingDocument) -> serde_json::Value {
    let counts = doc.tag_counts();
    let map: serde_json::Map<String, serde_json::Value> = StrokeTag::ALL
        .iter()
        .zip(counts)
        .map(|(t, c)| (t.name().to_owned(), json!(c)))
        .collect();
    serde_json::Value::Object(map)
}

fn execute(command: Command, argv: Vec<String>) -> Result<()> {
    match command {
        Command::Mesh(a) => cmd_mesh(a, argv),
        Command::Render(a) => cmd_render(a, argv),
        Command::Contours(a) => cmd_contours(a, argv),
        Command::Draw(a) => cmd_draw(a, argv),
        Command::Trace(a) => cmd_trace(a, argv),
        Command::Hatch(a) => cmd_hatch(a, argv),
        Command::Rim(a) => cmd_rim(a, argv),
        Command::Eval(a) => cmd_eval(a, argv),
    }
}

fn cmd_mesh(a: MeshArgs, argv: Vec<String>) -> Result<()> {
    let d = a.detail.max(1);
    let mesh = match a.shape {
        Shape::Sphere => shapes::icosphere(d, 1.0),
        Shape::Torus => shapes::torus(1.0, 0.4, 24 * d, 12 * d),
        Shape::Cylinder => shapes::cylinder(1.0, 2.5, 24 * d, 8 * d, false),
        Shape::Cube => shapes::cube(1.0),
        Shape::Square => shapes::plane_grid(1.0, 4 * d),
    };
    let mut run = Run::new("mesh", argv);
    run.manifest.params = json!({"shape": format!("{:?}", a.shape).to_lowercase(), "detail": d});
    run.write(&a.out, write_obj(&mesh).as_bytes())?;
    run.finish(&a.out)
}

fn cmd_render(a: RenderArgs, argv: Vec<String>) -> Result<()> {
    let mut run = Run::new("render", argv);
    let mesh = load_mesh(&mut run, &a.scene.mesh)?;
    let cam = camera(&a.scene, &mesh)?;
    let material = a.material.config();
    let lighting = LightingConfig {
        mode: a.light,
        shadows: a.shadows,
        background: None,
    };
    let out = render(&mesh, &cam, &material, &lighting).map_err(|e| CliError::stage("render", e))?;
    run.manifest.params = json!({
        "scene": scene_json(&a.scene, &cam),
        "material": material_json(&material),
        "light": light_name(&a.light),
        "shadows": a.shadows,
    });
    let png = encode_png(&out.luminance).map_err(|e| CliError::stage("write", e))?;
    run.write(&with_ext(&a.out, "png"), &png)?;
    // depth scaled to [0, 1] over its finite range; background stays 1
    let depth = match out.depth.finite_range() {
        Some((lo, hi)) if hi > lo => out.depth.map(|z| if z.is_finite() { (z - lo) / (hi - lo) } else { 1.0 }),
        _ => out.depth.map(|z| if z.is_finite() { 0.0 } else { 1.0 }),
    };
    run.write(&with_ext(&a.out, "depth.pgm"), &encode_pgm16(&depth))?;
    run.finish(&a.out)
}

fn cmd_contours(a: ContoursArgs, argv: Vec<String>) -> Result<()> {
    let mut run = Run::new("contours", argv);
    let mesh = load_mesh(&mut run, &a.scene.mesh)?;
    let cam = camera(&a.scene, &mesh)?;
    let out = render(&mesh, &cam, &MaterialConfig::default(), &LightingConfig::headlight()).map_err(|e| CliError::stage("render", e))?;
    let all = pipeline::object_contours(&mesh, &cam, a.crease_angle);
    let vis = VisibilityParams {
        keep_hidden: a.hidden,
        ..Default::default()
    };
    let set = clip_visible(&all, &out.depth, &cam, &vis);
    run.manifest.params = json!({
        "scene": scene_json(&a.scene, &cam),
        "crease_angle": a.crease_angle,
        "hidden": a.hidden,
        "polylines": set.polylines.len(),
        "non_manifold_warnings": set.non_manifold_warnings,
    });
    if set.non_manifold_warnings > 0 {
        eprintln!("warning [contours]: {} crossings on non-manifold edges left unchained", set.non_manifold_warnings);
    }
    run.write(&with_ext(&a.out, "contours"), write_contours(&set).as_bytes())?;
    if a.overlay {
        let strokes: Vec<Stroke> = set
            .project(&cam)
            .into_iter()
            .filter_map(|(_, p)| Stroke::uniform(p, 1.0, StrokeTag::Contour).ok())
            .collect();
        let doc = compose(&[strokes], cam.width(), cam.height(), Polarity::DarkOnLight);
        let ink = rasterize_drawing(&doc, 2).map_err(|e| CliError::stage("raster", e))?;
        let png = encode_png(&overlay(&out.luminance, &ink)).map_err(|e| CliError::stage("write", e))?;
        run.write(&with_ext(&a.out, "png"), &png)?;
    }
    run.finish(&a.out)
}

fn draw_params(a: &DrawArgs) -> DrawParams {
    DrawParams {
        material: a.material.config(),
        lighting: LightingConfig {
            mode: a.light,
            shadows: a.shadows,
            background: None,
        },
        crease_angle: a.crease_angle,
        valley: a.valley.valley(),
        widths: a.valley.widths(),
        ..Default::default()
    }
}

fn draw_json(a: &DrawArgs, p: &DrawParams, cam: &Camera) -> Result<serde_json::Value> {
    Ok(json!({
        "scene": scene_json(&a.scene, cam),
        "material": material_json(&p.material),
        "light": light_name(&a.light),
        "shadows": a.shadows,
        "crease_angle": p.crease_angle,
        "valleys": valley_json(&p.valley, &p.link, &p.widths, cam.width(), cam.height())?,
        "contour_radius": p.contour_radius,
        "supersample": a.output.supersample,
    }))
}

fn cmd_draw(a: DrawArgs, argv: Vec<String>) -> Result<()> {
    check_supersample(a.output.supersample)?;
    let mut run = Run::new("draw", argv);
    let mesh = load_mesh(&mut run, &a.scene.mesh)?;
    let cam = camera(&a.scene, &mesh)?;
    let p = draw_params(&a);
    let out = pipeline::draw(&mesh, &cam, &p).map_err(|e| CliError::from(e))?;
    run.manifest.params = draw_json(&a, &p, &cam)?;
    run.manifest.params["strokes"] = tag_counts_json(&out.document);
    write_drawing_files(&mut run, &a.output.out, &out.document, a.output.supersample)?;
    if a.output.save_render {
        save_render(&mut run, &a.output.out, &out.render.luminance)?;
    }
    run.finish(&a.output.out)
}

fn cmd_trace(a: TraceArgs, argv: Vec<String>) -> Result<()> {
    check_supersample(a.supersample)?;
    let mut run = Run::new("trace", argv);
    let img = load_image(&mut run, &a.image)?;
    let params = TraceParams {
        valley: a.valley.valley(),
        link: LinkParams::default(),
        widths: a.valley.widths(),
    };
    let doc = pipeline::trace(&img, &params).map_err(|e| CliError::from(e))?;
    run.manifest.params = json!({
        "image": a.image.display().to_string(),
        "valleys": valley_json(&params.valley, &params.link, &params.widths, img.width(), img.height())?,
        "supersample": a.supersample,
        "strokes": tag_counts_json(&doc),
    });
    write_drawing_files(&mut run, &a.out, &doc, a.supersample)?;
    if a.valley_maps {
        let map = detect_valleys(&img, &params.valley).map_err(|e| CliError::stage("valleys", e))?;
        let [s, o, m] = valley_map_pgms(&map);
        run.write(&with_ext(&a.out, "strength.pgm"), &s)?;
        run.write(&with_ext(&a.out, "orientation.pgm"), &o)?;
        run.write(&with_ext(&a.out, "mask.pgm"), &m)?;
    }
    run.finish(&a.out)
}

fn cmd_hatch(a: HatchArgs, argv: Vec<String>) -> Result<()> {
    check_supersample(a.draw.output.supersample)?;
    let mut run = Run::new("hatch", argv);
    let mesh = load_mesh(&mut run, &a.draw.scene.mesh)?;
    let cam = camera(&a.draw.scene, &mesh)?;
    let p = draw_params(&a.draw);
    let hp = HatchParams {
        spacing: a.spacing,
        levels: if a.cross { 2 } else { 1 },
        t1: a.t1,
        t2: a.t2,
        step: a.step,
        max_len: a.max_len,
        seed: a.seed,
        thickness: a.hatch_width,
    };
    let which = match a.direction {
        Direction::D1 => Principal::Max,
        Direction::D2 => Principal::Min,
    };
    let out = pipeline::hatch(&mesh, &cam, &p, &hp, which).map_err(|e| CliError::from(e))?;
    let mut params = draw_json(&a.draw, &p, &cam)?;
    params["hatching"] = json!({
        "spacing": hp.spacing, "levels": hp.levels, "t1": hp.t1, "t2": hp.t2,
        "step": hp.step, "max_len": hp.max_len, "seed": hp.seed,
        "width": hp.stroke_width(), "direction": which.name(),
    });
    params["strokes"] = tag_counts_json(&out.draw.document);
    run.manifest.params = params;
    write_drawing_files(&mut run, &a.draw.output.out, &out.draw.document, a.draw.output.supersample)?;
    if a.draw.output.save_render {
        save_render(&mut run, &a.draw.output.out, &out.draw.render.luminance)?;
    }
    run.finish(&a.draw.output.out)
}

fn cmd_rim(a: RimArgs, argv: Vec<String>) -> Result<()> {
    check_supersample(a.output.supersample)?;
    let mut run = Run::new("rim", argv);
    let mesh = load_mesh(&mut run, &a.scene.mesh)?;
    let cam = camera(&a.scene, &mesh)?;
    let params = RimParams {
        material: a.material.config(),
        ring_count: a.ring_count,
        ring_radius: a.ring_radius,
        trace: TraceParams {
            valley: a.valley.valley(),
            link: LinkParams::default(),
            widths: a.valley.widths(),
        },
    };
    let out = pipeline::rim(&mesh, &cam, &params).map_err(|e| CliError::from(e))?;
    run.manifest.params = json!({
        "scene": scene_json(&a.scene, &cam),
        "material": material_json(&params.material),
        "light": light_name(&LightMode::Ring { count: a.ring_count, radius: a.ring_radius }),
        "valleys": valley_json(&params.trace.valley, &params.trace.link, &params.trace.widths, cam.width(), cam.height())?,
        "supersample": a.output.supersample,
        "polarity": out.document.polarity.name(),
        "strokes": tag_counts_json(&out.document),
    });
    write_drawing_files(&mut run, &a.output.out, &out.document, a.output.supersample)?;
    if a.output.save_render {
        save_render(&mut run, &a.output.out, &out.render.luminance)?;
    }
    run.finish(&a.output.out)
}

fn cmd_eval(a: EvalArgs, argv: Vec<String>) -> Result<()> {
    let mut run = Run::new("eval", argv);
    let drawing_bytes = run.read(&a.drawing)?;
    let mesh = load_mesh(&mut run, &a.scene.mesh)?;
    let cam = camera(&a.scene, &mesh)?;
    let is_strokes = a.drawing.extension().is_some_and(|e| e == "strokes");
    let ink: Mask = if is_strokes {
        let text = String::from_utf8(drawing_bytes).map_err(|_| CliError::stage("drawing", "strokes file is not UTF-8"))?;
        let doc = parse_drawing(&text).map_err(|e| CliError::stage("drawing", e))?;
        ink_mask(&doc).map_err(|e| CliError::stage("eval", e))?
    } else {
        let img = decode_image(&drawing_bytes).map_err(|e| CliError::stage("drawing", e))?;
        let light = matches!(a.polarity, PolarityArg::LightOnDark);
        Mask::from_fn(img.width(), img.height(), |x, y| if light { img.get(x, y) > 0.5 } else { img.get(x, y) < 0.5 })
    };
    if (ink.width(), ink.height()) != (cam.width(), cam.height()) {
        return Err(CliError::stage(
            "eval",
            format!("drawing is {}x{} but the camera is {}x{}", ink.width(), ink.height(), cam.width(), cam.height()),
        ));
    }
    let params = DrawParams {
        valley: ValleyParams {
            sigma: a.sigma,
            tau: a.tau,
            ..Default::default()
        },
        ..Default::default()
    };
    let reference = pipeline::draw(&mesh, &cam, &params).map_err(|e| CliError::from(e))?;
    let lum = &reference.render.luminance;
    let dark = darkness_from_mask(&ink, lum, &reference.render.depth).map_err(|e| CliError::stage("eval", e))?;
    let contours = reference.projected_points();
    let mut report = Report::default();
    report.text("drawing", &a.drawing.display().to_string());
    report.int("ink_pixels", ink.count() as i64);
    report.num("darkness_under_ink", dark.mean_under_ink);
    report.num("darkness_elsewhere", dark.mean_elsewhere);
    report.num("darkness_ratio", dark.ratio);
    report.num("coverage_radius", a.radius);
    match coverage_of(&ink, &contours, a.radius) {
        Ok(c) => report.num("contour_coverage", c),
        Err(e) => return Err(CliError::stage("eval", e)),
    }
    let valleys: Vec<Vec<Vec2>> = reference.valley_lines.iter().map(|v| v.points.clone()).collect();
    if let Ok(c) = chamfer(&contours, &valleys, SAMPLES_PER_PX) {
        report.num("contour_valley_chamfer_mean", c.mean);
        report.num("contour_valley_chamfer_max", c.max);
    }
    run.manifest.params = json!({
        "scene": scene_json(&a.scene, &cam),
        "radius": a.radius, "sigma": a.sigma, "tau": a.tau,
        "polarity": if is_strokes { "from-file" } else { match a.polarity { PolarityArg::DarkOnLight => "dark-on-light", PolarityArg::LightOnDark => "light-on-dark" } },
    });
    let text = match a.format {
        ReportFormat::Kv => report.to_key_value(),
        ReportFormat::Json => report.to_json(),
    };
    match &a.out {
        Some(path) => {
            run.write(path, text.as_bytes())?;
            run.finish(path)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
