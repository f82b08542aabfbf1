use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use linedraw::formats::{parse_contours, parse_drawing};
use linedraw::imageio::decode_image;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_linedraw"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sphere(dir: &Path) -> PathBuf {
    let obj = dir.join("sphere.obj");
    let out = run(&["mesh", "--shape", "sphere", "--detail", "3", "--out", s(&obj)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    obj
}

const SCENE: [&str; 6] = ["--camera", "0,0,5", "--width", "128", "--height", "128"];

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["draw", "--camera", "0,0"]).status.code(), Some(2));
    assert_eq!(run(&["render", "--mesh", "x.obj", "--camera", "1,2,3", "--light", "sun", "--out", "x"]).status.code(), Some(2));
}

#[test]
fn missing_input_exits_2_with_tagged_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["draw", "--mesh", s(&dir.path().join("none.obj")), "--camera", "0,0,5", "--out", s(&dir.path().join("d"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error [input]:"));
}

#[test]
fn stage_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.obj");
    std::fs::write(&bad, "v 0 0 0\nf 1 2 3\n").unwrap();
    let out = run(&["draw", "--mesh", s(&bad), "--camera", "0,0,5", "--out", s(&dir.path().join("d"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error [mesh]: "));

    let obj = sphere(dir.path());
    let stem = dir.path().join("d");
    let mut args = vec!["draw", "--mesh", s(&obj)];
    args.extend(SCENE);
    args.extend(["--tau", "1.5", "--out", s(&stem)]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error [valleys]: tau 1.5"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn draw_writes_all_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let obj = sphere(dir.path());
    let stem = dir.path().join("d");
    let mut args = vec!["draw", "--mesh", s(&obj)];
    args.extend(SCENE);
    args.extend(["--out", s(&stem)]);
    assert!(run(&args).status.success());

    let doc = parse_drawing(&std::fs::read_to_string(stem.with_extension("strokes")).unwrap()).unwrap();
    assert_eq!((doc.width, doc.height), (128, 128));
    assert!(!doc.strokes.is_empty());
    let png = decode_image(&std::fs::read(stem.with_extension("png")).unwrap()).unwrap();
    assert_eq!((png.width(), png.height()), (128, 128));
    assert!(png.data().iter().any(|&v| v < 0.5));

    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(stem.with_extension("manifest")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "draw");
    assert_eq!(manifest["params"]["valleys"]["tau"], 0.25);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);
    let outputs: Vec<&str> = manifest["outputs"].as_array().unwrap().iter().map(|o| o["path"].as_str().unwrap()).collect();
    for ext in ["svg", "png", "strokes"] {
        assert!(outputs.iter().any(|p| p.ends_with(ext)), "{outputs:?}");
    }
    let svg_hash = manifest["outputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(svg_hash, linedraw::manifest::sha256_hex(&std::fs::read(stem.with_extension("svg")).unwrap()));
}

#[test]
fn draw_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let obj = sphere(dir.path());
    let mut files = Vec::new();
    for stem in ["a", "b"] {
        let out = dir.path().join(stem);
        let mut args = vec!["draw", "--mesh", s(&obj)];
        args.extend(SCENE);
        args.extend(["--out", s(&out)]);
        assert!(run(&args).status.success());
        files.push(["svg", "png", "strokes"].map(|e| std::fs::read(out.with_extension(e)).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn rim_drawing_is_dark_where_headlight_is_dark() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("s.obj");
    assert!(run(&["mesh", "--shape", "sphere", "--out", s(&obj)]).status.success());
    let stem = dir.path().join("r");
    assert!(run(&["rim", "--mesh", s(&obj), "--camera", "0,0,5", "--out", s(&stem)]).status.success());
    let out = run(&[
        "eval", "--drawing", s(&stem.with_extension("png")), "--polarity", "light-on-dark",
        "--mesh", s(&obj), "--camera", "0,0,5", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ratio = report["darkness_ratio"].as_f64().unwrap();
    assert!(ratio <= 0.3, "{ratio}");
    assert!(report["contour_coverage"].as_f64().unwrap() > 0.9);
}

#[test]
fn eval_of_strokes_file_matches_raster_eval() {
    let dir = tempfile::tempdir().unwrap();
    let obj = sphere(dir.path());
    let stem = dir.path().join("d");
    let mut args = vec!["draw", "--mesh", s(&obj)];
    args.extend(SCENE);
    args.extend(["--supersample", "1", "--out", s(&stem)]);
    assert!(run(&args).status.success());
    let eval = |drawing: &Path| {
        let mut a = vec!["eval", "--drawing", s(drawing), "--mesh", s(&obj)];
        a.extend(SCENE);
        let out = run(&a);
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let from_strokes = eval(&stem.with_extension("strokes"));
    let from_png = eval(&stem.with_extension("png"));
    let strip = |t: &str| t.lines().filter(|l| !l.starts_with("drawing=")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&from_strokes), strip(&from_png));
}

#[test]
fn contours_and_hatch_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cube = dir.path().join("cube.obj");
    assert!(run(&["mesh", "--shape", "cube", "--out", s(&cube)]).status.success());
    let stem = dir.path().join("c");
    let out = run(&["contours", "--mesh", s(&cube), "--camera", "4,3,5", "--fov", "40", "--width", "128", "--height", "128", "--out", s(&stem)]);
    assert!(out.status.success());
    let set = parse_contours(&std::fs::read_to_string(stem.with_extension("contours")).unwrap()).unwrap();
    assert!(set.polylines.iter().all(|p| !p.hidden));
    assert!(!set.polylines.is_empty());

    let cyl = dir.path().join("cyl.obj");
    assert!(run(&["mesh", "--shape", "cylinder", "--detail", "2", "--out", s(&cyl)]).status.success());
    let h = dir.path().join("h");
    let out = run(&["hatch", "--mesh", s(&cyl), "--camera", "0,-6,0", "--fov", "35", "--width", "128", "--height", "128", "--cross", "--out", s(&h)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = parse_drawing(&std::fs::read_to_string(h.with_extension("strokes")).unwrap()).unwrap();
    assert!(doc.strokes.iter().any(|s| s.tag.name() == "hatch"));

    let r = dir.path().join("r");
    assert!(run(&["render", "--mesh", s(&cyl), "--camera", "0,-6,0", "--width", "96", "--height", "96", "--out", s(&r)]).status.success());
    let t = dir.path().join("t");
    let out = run(&["trace", "--image", s(&r.with_extension("png")), "--valley-maps", "--out", s(&t)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for ext in ["svg", "png", "strokes", "strength.pgm", "orientation.pgm", "mask.pgm", "manifest"] {
        assert!(dir.path().join(format!("t.{ext}")).is_file(), "{ext}");
    }
}
