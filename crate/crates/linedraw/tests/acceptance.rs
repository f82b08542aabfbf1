//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Scenes are fixed: unit icosphere (4 subdivisions) seen from 5 radii,
//! torus (1, 0.4) from (0, 2.5, 4), cylinder (1, 2.5) from the side, cube
//! from (4, 3, 5). All at 512 x 512.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use linedraw_core::bvh::Bvh;
use linedraw_core::camera::Camera;
use linedraw_core::contour::{extract_smooth_contours, ContourTag};
use linedraw_core::eval::{bright_pixel_distance, chamfer, contour_coverage, darkness_score, mask_displacement, random_strokes};
use linedraw_core::hatching::{generate_hatching, HatchParams, Principal};
use linedraw_core::image::{Mask, ScalarImage};
use linedraw_core::math::{line_angle, line_angle_diff, Vec2, Vec3};
use linedraw_core::mesh::Mesh;
use linedraw_core::pipeline::{draw, hatch, rim, trace, DrawParams, RimParams, TraceParams};
use linedraw_core::render::{render, LightingConfig, MaterialConfig};
use linedraw_core::shapes;
use linedraw_core::spatial::point_segment_distance;
use linedraw_core::strokes::{invert_tone, rasterize_drawing, Polarity, StrokeTag};
use linedraw_core::valleys::{detect_valleys, link_valleys, LinkParams, ValleyParams, ValleyTag};
use linedraw_core::visibility::{clip_visible, VisibilityParams};

const SIZE: usize = 512;

type Check = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sphere_scene() -> (Mesh, Camera) {
    let cam = Camera::looking_at(Vec3::new(0.0, 0.0, 5.0), Vec3::ZERO, 30.0, SIZE, SIZE).unwrap();
    (shapes::icosphere(4, 1.0), cam)
}

fn torus_scene() -> (Mesh, Camera) {
    let cam = Camera::looking_at(Vec3::new(0.0, 2.5, 4.0), Vec3::ZERO, 40.0, SIZE, SIZE).unwrap();
    (shapes::torus(1.0, 0.4, 96, 48), cam)
}

fn cylinder_scene() -> (Mesh, Camera) {
    let cam = Camera::looking_at(Vec3::new(0.0, -6.0, 0.0), Vec3::ZERO, 35.0, SIZE, SIZE).unwrap();
    (shapes::cylinder(1.0, 2.5, 96, 32, false), cam)
}

fn cube_scene() -> (Mesh, Camera) {
    let cam = Camera::looking_at(Vec3::new(4.0, 3.0, 5.0), Vec3::ZERO, 40.0, SIZE, SIZE).unwrap();
    (shapes::cube(1.0), cam)
}

/// Image radius and center of the occluding contour of a unit sphere at the
/// origin, seen from distance `d` on the view axis.
fn sphere_circle(cam: &Camera, d: f64) -> (Vec2, f64) {
    let center = cam.project(Vec3::ZERO).unwrap().0;
    let half = (1.0 / d).asin();
    (center, cam.focal() * half.tan())
}

/// Ray / unit-sphere hit nearest the camera.
fn hit_sphere(cam: &Camera, px: Vec2) -> Option<Vec3> {
    let o = cam.center();
    let d = cam.ray_direction(px);
    let b = o.dot(d);
    let c = o.dot(o) - 1.0;
    let a = d.dot(d);
    let disc = b * b - a * c;
    (disc >= 0.0).then(|| o + d * ((-b - disc.sqrt()) / a))
}

/// Brute-force symmetric mean of nearest-segment distances, sampled every
/// 0.25 px.
fn brute_chamfer(a: &[Vec<Vec2>], b: &[Vec<Vec2>]) -> f64 {
    fn samples(pls: &[Vec<Vec2>]) -> Vec<Vec2> {
        let mut out = Vec::new();
        for pl in pls {
            if pl.len() == 1 {
                out.push(pl[0]);
            }
            for w in pl.windows(2) {
                let n = ((w[1] - w[0]).norm() * 4.0).ceil().max(1.0) as usize;
                for k in 0..n {
                    out.push(w[0].lerp(w[1], k as f64 / n as f64));
                }
            }
            if let Some(&last) = pl.last() {
                out.push(last);
            }
        }
        out
    }
    fn one_way(from: &[Vec2], to: &[Vec<Vec2>]) -> f64 {
        let segs: Vec<(Vec2, Vec2)> = to
            .iter()
            .flat_map(|pl| if pl.len() == 1 { vec![(pl[0], pl[0])] } else { pl.windows(2).map(|w| (w[0], w[1])).collect() })
            .collect();
        let total: f64 = from
            .iter()
            .map(|&p| segs.iter().map(|&(s, e)| point_segment_distance(p, s, e)).fold(f64::INFINITY, f64::min))
            .sum();
        total / from.len() as f64
    }
    0.5 * (one_way(&samples(a), b) + one_way(&samples(b), a))
}

fn c01_sphere_contour() -> Outcome {
    let (mesh, cam) = sphere_scene();
    let t0 = Instant::now();
    let set = extract_smooth_contours(&mesh, &cam);
    let elapsed = t0.elapsed().as_secs_f64();
    let diag = mesh.bbox().diagonal();
    let c = cam.center();
    // g at each contour point from the interpolated normal of the edge it lies on
    let mut worst_g: f64 = 0.0;
    let mut found = 0usize;
    let edges = mesh.edges();
    let (v, n) = (mesh.vertices(), mesh.normals());
    let points: Vec<Vec3> = set.polylines.iter().flat_map(|p| p.points.iter().copied()).collect();
    for &p in &points {
        for e in &edges {
            let (a, b) = (v[e.a as usize], v[e.b as usize]);
            let ab = b - a;
            let t = (p - a).dot(ab) / ab.dot(ab);
            if !(0.0..=1.0).contains(&t) || (a.lerp(b, t) - p).norm() > 1e-9 {
                continue;
            }
            let nrm = n[e.a as usize].lerp(n[e.b as usize], t).normalize();
            worst_g = worst_g.max(nrm.dot(c - p).abs());
            found += 1;
            break;
        }
    }
    let (center, radius) = sphere_circle(&cam, 5.0);
    let radial: f64 = set
        .project(&cam)
        .iter()
        .flat_map(|(_, pl)| pl.iter())
        .map(|q| ((q.distance(center) - radius) / radius).abs())
        .sum::<f64>()
        / points.len() as f64;
    let g_bar = 1e-5 * diag;
    let pass = found == points.len() && !points.is_empty() && worst_g <= g_bar && radial <= 0.01 && elapsed <= 2.0;
    outcome(
        pass,
        format!(
            "max|g| {worst_g:.2e} (<= {g_bar:.2e}), mean radial error {:.3}% (<= 1%), {elapsed:.3} s (<= 2 s), {} points",
            radial * 100.0,
            points.len()
        ),
    )
}

fn c02_headlight_shading() -> Outcome {
    let (mesh, cam) = sphere_scene();
    let out = render(&mesh, &cam, &MaterialConfig::default(), &LightingConfig::headlight()).unwrap();
    let (center, radius) = sphere_circle(&cam, 5.0);
    let c = cam.center();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for y in 0..SIZE {
        for x in 0..SIZE {
            let px = Vec2::new(x as f64 + 0.5, y as f64 + 0.5);
            if px.distance(center) > radius - 2.0 {
                continue;
            }
            let p = hit_sphere(&cam, px).expect("inside the disc");
            let cos = p.dot(c - p) / (c - p).norm();
            worst = worst.max((out.luminance.get(x, y) - cos).abs());
            count += 1;
        }
    }
    outcome(worst <= 0.02, format!("max |I - cos| {worst:.4} (<= 0.02) over {count} pixels"))
}

fn c03_contour_valley_consistency() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, (mesh, cam)) in [("sphere", sphere_scene()), ("torus", torus_scene())] {
        let d = draw(&mesh, &cam, &DrawParams::default()).unwrap();
        let map = detect_valleys(&d.render.luminance, &ValleyParams::default()).unwrap();
        let valleys: Vec<Vec<Vec2>> = link_valleys(&map, &LinkParams::default()).iter().map(|v| v.path()).collect();
        let contours: Vec<Vec<Vec2>> = d.projected.iter().filter(|(t, _)| *t == ContourTag::SmoothContour).map(|(_, p)| p.clone()).collect();
        let lib = chamfer(&contours, &valleys, 4.0).unwrap().mean;
        let oracle = brute_chamfer(&contours, &valleys);
        let ok = lib <= 1.5 && (lib - oracle).abs() <= 0.05;
        pass &= ok;
        parts.push(format!("{name} {lib:.3} px (oracle {oracle:.3})"));
    }
    outcome(pass, format!("{} (<= 1.5 px)", parts.join(", ")))
}

fn c04_suggestive_condition() -> Outcome {
    let (mesh, cam) = torus_scene();
    let params = DrawParams::default();
    let d = draw(&mesh, &cam, &params).unwrap();
    let lum = &d.render.luminance;
    let tau = params.valley.tau;
    let (mut points, mut violations) = (0usize, 0usize);
    let runs = d.valley_lines.iter().filter(|v| v.tag == ValleyTag::Suggestive).map(|v| &v.points);
    let strokes = d.document.strokes.iter().filter(|s| s.tag == StrokeTag::Suggestive).map(|s| &s.points);
    for pts in runs.chain(strokes) {
        for p in pts {
            points += 1;
            let i = lum.sample_nearest(*p).unwrap_or(f64::NAN);
            if !(i > 0.0 && i < tau) {
                violations += 1;
            }
        }
    }
    outcome(points > 0 && violations == 0, format!("{violations} violations over {points} suggestive points"))
}

fn c05_sphere_convexity() -> Outcome {
    let (mesh, cam) = sphere_scene();
    let d = draw(&mesh, &cam, &DrawParams::default()).unwrap();
    let tagged: usize = d.valley_lines.iter().filter(|v| v.tag == ValleyTag::Suggestive).map(|v| v.points.len()).sum();
    let strokes = d.document.count(StrokeTag::Suggestive);
    outcome(tagged == 0 && strokes == 0, format!("{tagged} suggestive points, {strokes} suggestive strokes"))
}

fn c06_darkness() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, (mesh, cam)) in [("sphere", sphere_scene()), ("torus", torus_scene())] {
        let d = draw(&mesh, &cam, &DrawParams::default()).unwrap();
        let lum = &d.render.luminance;
        let ratio = darkness_score(&d.document, lum, &d.render.depth).unwrap().ratio;
        let region = d.render.gbuffer.coverage();
        let baseline: Vec<f64> = (0..20)
            .map(|seed| {
                let doc = random_strokes(&region, 30, 60.0, 3.0, seed, Polarity::DarkOnLight);
                darkness_score(&doc, lum, &d.render.depth).unwrap().ratio
            })
            .collect();
        let lo = baseline.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = baseline.iter().copied().fold(0.0, f64::max);
        let ok = ratio <= 0.3 && lo >= 0.8 && hi <= 1.2;
        pass &= ok;
        parts.push(format!("{name} {ratio:.3} (random {lo:.3}..{hi:.3})"));
    }
    outcome(pass, format!("{} (<= 0.3; random within 1.0 +- 0.2)", parts.join(", ")))
}

fn c07_side_light() -> Outcome {
    let (mesh, cam) = torus_scene();
    let head = draw(&mesh, &cam, &DrawParams::default()).unwrap();
    let head_doc = trace(&head.render.luminance, &TraceParams::default()).unwrap();
    // light 90 degrees off the view direction, to the right of the camera
    let side = render(&mesh, &cam, &MaterialConfig::default(), &LightingConfig::point(cam.right() * 20.0)).unwrap();
    let side_doc = trace(&side.luminance, &TraceParams::default()).unwrap();
    let ch = contour_coverage(&head_doc, &head.contours, &cam, 2.0).unwrap();
    let cs = contour_coverage(&side_doc, &head.contours, &cam, 2.0).unwrap();
    outcome(ch - cs >= 0.2, format!("coverage headlight {ch:.3}, side {cs:.3}, drop {:.3} (>= 0.2)", ch - cs))
}

fn c08_rim() -> Outcome {
    let (mesh, cam) = sphere_scene();
    let r = rim(&mesh, &cam, &RimParams::default()).unwrap();
    let head = draw(&mesh, &cam, &DrawParams::default()).unwrap();
    let dist = bright_pixel_distance(&r.render.luminance, &r.render.depth, &head.projected_points(), 0.01).unwrap();
    // analytic cross-check of the contour used above
    let (center, radius) = sphere_circle(&cam, 5.0);
    let circle: Vec<Vec2> = (0..=720)
        .map(|k| center + Vec2::from_angle(k as f64 * std::f64::consts::TAU / 720.0) * radius)
        .collect();
    let analytic = bright_pixel_distance(&r.render.luminance, &r.render.depth, &[circle], 0.01).unwrap();
    let inv = invert_tone(&r.document);
    let ratio = darkness_score(&inv, &head.render.luminance, &head.render.depth).unwrap().ratio;
    let pass = dist <= 2.0 && analytic <= 2.0 && ratio <= 0.3;
    outcome(
        pass,
        format!("bright-pixel distance {dist:.3} px (analytic circle {analytic:.3}) (<= 2), inverted darkness {ratio:.3} (<= 0.3)"),
    )
}

fn c09_glossy() -> Outcome {
    let (mesh, cam) = sphere_scene();
    let p = ValleyParams::default();
    let matte = render(&mesh, &cam, &MaterialConfig::default(), &LightingConfig::headlight()).unwrap();
    let glossy = render(&mesh, &cam, &MaterialConfig::glossy(0.5, 32.0), &LightingConfig::headlight()).unwrap();
    let violations = matte.luminance.data().iter().zip(glossy.luminance.data()).filter(|(a, b)| b < a).count();
    let ma = detect_valleys(&matte.luminance, &p).unwrap().mask;
    let mb = detect_valleys(&glossy.luminance, &p).unwrap().mask;
    let disp = mask_displacement(&ma, &mb);
    outcome(
        violations == 0 && disp <= 1.0 && ma.count() > 0,
        format!("{violations} darkened pixels, valley mask displacement {disp:.3} px (<= 1)"),
    )
}

fn v_ramp(x0: f64) -> ScalarImage {
    // values on a 2^-8 grid so gains by powers of two stay exact
    ScalarImage::from_fn(128, 48, |x, _| (1.0 / 64.0 + (x as f64 + 0.5 - x0).abs() / 128.0).min(1.0))
}

fn quantize8(img: &ScalarImage) -> ScalarImage {
    img.map(|v| (v.clamp(0.0, 1.0) * 255.0).round() / 256.0)
}

fn c10_valley_detector() -> Outcome {
    let p = ValleyParams::default();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for x0 in [32.0, 64.0, 96.0] {
        let map = detect_valleys(&v_ramp(x0), &p).unwrap();
        let pts: Vec<Vec2> = map.mask.iter_set().map(|(x, y)| map.point(x, y)).collect();
        ok &= !pts.is_empty();
        for q in pts {
            worst = worst.max((q.x - x0).abs());
        }
    }
    let (mesh, cam) = torus_scene();
    let lum = quantize8(&render(&mesh, &cam, &MaterialConfig::default(), &LightingConfig::headlight()).unwrap().luminance);
    let base = detect_valleys(&lum, &p).unwrap().mask;
    let mut gain_ok = true;
    for (a, b) in [(0.5, 0.25), (2.0, -1.0 / 64.0), (0.25, 0.5)] {
        let q = ValleyParams {
            tau: a * p.tau + b,
            min_strength: a * p.min_strength,
            ..p
        };
        gain_ok &= detect_valleys(&lum.map(|v| a * v + b), &q).unwrap().mask == base;
    }
    let rot_ok = detect_valleys(&lum.rotated_ccw(), &p).unwrap().mask == base.rotated_ccw();
    let pass = ok && worst <= 0.5 && gain_ok && rot_ok;
    outcome(
        pass,
        format!("V-ramp max offset {worst:.3} px (<= 0.5), gain invariance {gain_ok}, rotation covariance {rot_ok}"),
    )
}

fn c11_hatching() -> Outcome {
    let (mesh, cam) = cylinder_scene();
    let h = hatch(&mesh, &cam, &DrawParams::default(), &HatchParams::default(), Principal::Max).unwrap();
    let lum = &h.draw.render.luminance;
    let ink = rasterize_drawing(&h.draw.document, 4).unwrap().downsample_box(8);
    let reference = lum.downsample_box(8);
    let hatched = Mask::from_fn(SIZE, SIZE, |x, y| h.field.mask.get(x, y) && lum.get(x, y) < HatchParams::default().t1);
    let blocks = hatched.to_image().downsample_box(8);
    let (mut err, mut n) = (0.0, 0usize);
    for y in 0..blocks.height() {
        for x in 0..blocks.width() {
            if blocks.get(x, y) == 1.0 {
                err += (ink.get(x, y) - reference.get(x, y)).abs();
                n += 1;
            }
        }
    }
    let tone = err / n.max(1) as f64;

    // orientation against the projected circumferential tangent, away from the contour
    let single = generate_hatching(lum, &h.field, &HatchParams { levels: 1, ..Default::default() }).unwrap();
    let o = cam.center();
    let mut worst: f64 = 0.0;
    let mut segs = 0usize;
    for s in &single {
        for w in s.points.windows(2) {
            let m = w[0].lerp(w[1], 0.5);
            let d = cam.ray_direction(m);
            let a = d.x * d.x + d.y * d.y;
            let b = 2.0 * (o.x * d.x + o.y * d.y);
            let c = o.x * o.x + o.y * o.y - 1.0;
            let disc = b * b - 4.0 * a * c;
            if disc < 0.0 {
                continue;
            }
            let p = o + d * ((-b - disc.sqrt()) / (2.0 * a));
            let normal = Vec3::new(p.x, p.y, 0.0);
            if normal.dot((o - p).normalize()) < 0.2 {
                continue;
            }
            let e = cam.project_direction(p, Vec3::new(-p.y, p.x, 0.0)).unwrap();
            let seg = w[1] - w[0];
            worst = worst.max(line_angle_diff(line_angle(seg.x, seg.y), line_angle(e.x, e.y)).to_degrees());
            segs += 1;
        }
    }
    let pass = n > 0 && tone <= 0.15 && segs > 0 && worst <= 5.0;
    outcome(
        pass,
        format!("tone error {tone:.3} over {n} blocks (<= 0.15), max orientation error {worst:.2} deg over {segs} segments (<= 5)"),
    )
}

fn c12_visibility() -> Outcome {
    let (mesh, cam) = torus_scene();
    let depth = render(&mesh, &cam, &MaterialConfig::default(), &LightingConfig::headlight()).unwrap().depth;
    let all = extract_smooth_contours(&mesh, &cam);
    let params = VisibilityParams {
        keep_hidden: true,
        ..Default::default()
    };
    let clipped = clip_visible(&all, &depth, &cam, &params);
    let segs: Vec<(Vec3, Vec3, bool)> = clipped.polylines.iter().flat_map(|pl| pl.segments().map(move |(a, b)| (a, b, pl.hidden))).collect();
    let lengths: Vec<f64> = segs.iter().map(|(a, b, _)| (*b - *a).norm()).collect();
    let total: f64 = lengths.iter().sum();
    let bvh = Bvh::build(&mesh);
    let c = cam.center();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut agree = 0;
    let samples = 1000;
    for _ in 0..samples {
        let mut target = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * total;
        let mut k = 0;
        while k + 1 < segs.len() && target > lengths[k] {
            target -= lengths[k];
            k += 1;
        }
        let (a, b, hidden) = segs[k];
        let p = a.lerp(b, (target / lengths[k].max(1e-300)).clamp(0.0, 1.0));
        // lift off the tessellated surface along the analytic torus normal
        let ring = Vec3::new(p.x, 0.0, p.z).normalize();
        let n = (p - ring).normalize();
        let origin = p + n * 5e-3;
        let visible = !bvh.occluded(origin, c - origin, 1e-9, 1.0);
        if visible == !hidden {
            agree += 1;
        }
    }
    let frac = agree as f64 / samples as f64;
    outcome(frac >= 0.99, format!("agreement {:.1}% over {samples} samples (>= 99%)", frac * 100.0))
}

fn c13_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_linedraw");
    let obj = dir.path().join("torus.obj");
    let ok = Command::new(bin).args(["mesh", "--shape", "torus", "--out"]).arg(&obj).status().unwrap().success();
    if !ok {
        return outcome(false, "mesh command failed".into());
    }
    let run = |stem: &str, threads: &str| -> Option<(Vec<u8>, Vec<u8>)> {
        let out = dir.path().join(stem);
        let status = Command::new(bin)
            .env("RAYON_NUM_THREADS", threads)
            .args(["draw", "--camera", "0,2.5,4", "--fov", "40", "--mesh"])
            .arg(&obj)
            .arg("--out")
            .arg(&out)
            .status()
            .ok()?;
        status.success().then_some(())?;
        Some((std::fs::read(out.with_extension("svg")).ok()?, std::fs::read(out.with_extension("png")).ok()?))
    };
    let (Some(a), Some(b)) = (run("a", "1"), run("b", "8")) else {
        return outcome(false, "draw command failed".into());
    };
    // a third run in-process on a worker thread while another thread draws
    let third = dir.path().join("c");
    let args: Vec<std::ffi::OsString> = ["linedraw", "draw", "--camera", "0,2.5,4", "--fov", "40", "--mesh"]
        .iter()
        .map(Into::into)
        .chain([obj.clone().into_os_string(), "--out".into(), third.clone().into_os_string()])
        .collect();
    let busy = std::thread::spawn(|| {
        let (m, c) = torus_scene();
        draw(&m, &c, &DrawParams::default()).is_ok()
    });
    let code = std::thread::spawn(move || linedraw::cli::run(args)).join().unwrap();
    let busy_ok = busy.join().unwrap();
    let c = (std::fs::read(third.with_extension("svg")).unwrap_or_default(), std::fs::read(third.with_extension("png")).unwrap_or_default());
    let same = a == b && a == c;
    outcome(
        same && code == 0 && busy_ok && !a.0.is_empty(),
        format!("SVG {} bytes, PNG {} bytes, three runs identical: {same}", a.0.len(), a.1.len()),
    )
}

fn c14_cube() -> Outcome {
    let (mesh, cam) = cube_scene();
    let d = draw(&mesh, &cam, &DrawParams::default()).unwrap();
    let c = cam.center();
    let (v, f) = (mesh.vertices(), mesh.faces());
    // brute force: face pairs sharing two positions
    let front: Vec<bool> = (0..f.len())
        .map(|i| {
            let [a, b, cc] = f[i].map(|k| v[k as usize]);
            (b - a).cross(cc - a).dot(c - a) > 0.0
        })
        .collect();
    let same = |p: Vec3, q: Vec3| (p - q).norm() < 1e-9;
    let mut expected: Vec<(Vec3, Vec3)> = Vec::new();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let shared: Vec<Vec3> = f[i].iter().map(|&k| v[k as usize]).filter(|p| f[j].iter().any(|&m| same(*p, v[m as usize]))).collect();
            if shared.len() != 2 {
                continue;
            }
            let ni = mesh.face_normal(i);
            let nj = mesh.face_normal(j);
            let crease = ni.dot(nj) < 30f64.to_radians().cos();
            let silhouette = front[i] != front[j];
            // a convex solid hides exactly the edges between two back faces
            if (crease || silhouette) && (front[i] || front[j]) {
                expected.push((shared[0], shared[1]));
            }
        }
    }
    let projected: Vec<(Vec2, Vec2)> = expected.iter().map(|(a, b)| (cam.project(*a).unwrap().0, cam.project(*b).unwrap().0)).collect();
    // every drawn point lies on an expected edge, every expected edge is drawn
    let drawn: Vec<Vec<Vec2>> = d.document.strokes.iter().map(|s| s.points.clone()).collect();
    let stray = drawn
        .iter()
        .flatten()
        .filter(|p| projected.iter().all(|&(a, b)| point_segment_distance(**p, a, b) > 0.5))
        .count();
    let mut missing = 0;
    for &(a, b) in &projected {
        for k in 0..=20 {
            let q = a.lerp(b, k as f64 / 20.0);
            let near = drawn.iter().any(|pl| pl.windows(2).any(|w| point_segment_distance(q, w[0], w[1]) <= 0.5));
            if !near {
                missing += 1;
            }
        }
    }
    let valley_strokes = d.document.count(StrokeTag::Suggestive);
    let interior_valleys = d
        .valley_lines
        .iter()
        .flat_map(|l| l.points.iter())
        .filter(|p| projected.iter().all(|&(a, b)| point_segment_distance(**p, a, b) > 2.0))
        .count();
    let pass = expected.len() == 9 && stray == 0 && missing == 0 && valley_strokes == 0 && interior_valleys == 0;
    outcome(
        pass,
        format!(
            "{} expected edges, {stray} stray points, {missing} missing samples, {valley_strokes} valley strokes, {interior_valleys} interior valley points",
            expected.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Check; 14] = [
        ("sphere contour oracle", c01_sphere_contour),
        ("headlight shading oracle", c02_headlight_shading),
        ("contour / valley consistency", c03_contour_valley_consistency),
        ("suggestive condition", c04_suggestive_condition),
        ("sphere convexity", c05_sphere_convexity),
        ("darkness", c06_darkness),
        ("side-light degradation", c07_side_light),
        ("rim lighting", c08_rim),
        ("glossy monotonicity", c09_glossy),
        ("valley detector", c10_valley_detector),
        ("hatching tone and orientation", c11_hatching),
        ("visibility oracle", c12_visibility),
        ("determinism", c13_determinism),
        ("polyhedral scene", c14_cube),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("criterion {:2} {:<32} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
