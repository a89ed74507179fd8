use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use regprog::dsl::{execute, parse, Bounds};
use regprog::raster::{write_png, RasterImage, Rgb};
use regprog_cli::files::CentroidFile;
use serde_json::Value;

const GRID_2X2: &str = "For (i in range(0, 2)) {\n    For (j in range(0, 2)) {\n        Draw(x=10*i + 0*j + 0, y=0*i + 10*j + 0, attribute=0)\n    }\n}\n";

fn regprog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regprog"))
        .args(args)
        .env("RS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = regprog(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn error_json(out: &Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON document")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn ring(x: u32, y: u32) -> Rgb {
    let (dx, dy) = (x as i32 - 8, y as i32 - 8);
    let r2 = dx * dx + dy * dy;
    if (9..=30).contains(&r2) {
        [250, 200, 40]
    } else if r2 < 9 {
        [200, 40, 40]
    } else {
        [30, 40, 80]
    }
}

fn tiled_png(dir: &Path, n: u32) -> PathBuf {
    let img = RasterImage::from_fn(16 * n, 16 * n, |x, y| ring(x % 16, y % 16));
    let p = dir.join("tiled.png");
    write_png(&p, &img).unwrap();
    p
}

#[test]
fn exec_trivial_program() {
    let dir = tempfile::tempdir().unwrap();
    let prog = write(dir.path(), "p.rpg", GRID_2X2);
    let out = ok(&["exec", s(&prog), "--bounds", "100x100"]);
    let file: CentroidFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((file.width, file.height), (100, 100));
    assert_eq!(file.points.len(), 4);
    assert!(file.points.iter().all(|p| p.attribute == Some(0)));
}

#[test]
fn synth_of_exec_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let text = "For (i in range(0, 5)) {\n    For (j in range(0, 4)) {\n        If (-1*i + -1*j + 5 >= 0) {\n            Draw(x=12*i + 3*j + 4, y=0*i + 14*j + 6, attribute=0)\n        }\n    }\n}\n";
    let prog = write(dir.path(), "p.rpg", text);
    let cents = dir.path().join("c.json");
    let out_prog = dir.path().join("out.rpg");
    ok(&["exec", s(&prog), "--bounds", "60x50", "-o", s(&cents)]);
    ok(&["synth", s(&cents), "-o", s(&out_prog)]);
    let got = parse(&std::fs::read_to_string(&out_prog).unwrap()).unwrap();
    let want = parse(text).unwrap();
    let b = Bounds::new(60, 50);
    let pos = |p| execute(p, b).iter().map(|d| d.position).collect::<Vec<_>>();
    assert_eq!(pos(&got), pos(&want));
    assert_eq!(got.x(), want.x());
    assert_eq!(got.y(), want.y());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let img = tiled_png(dir.path(), 4);
    let prog = dir.path().join("program.rpg");
    ok(&["synth", s(&img), "-o", s(&prog)]);
    let manifest = dir.path().join("manifest.json");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["use_attributes"], true);
    assert!(m["costs"]["lattice"].as_f64().unwrap() > 0.0);
    let replayed = ok(&["replay", s(&manifest), "--check", s(&prog)]);
    assert_eq!(replayed.stdout, std::fs::read(&prog).unwrap());
}

#[test]
fn edit_with_unit_gain_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let img = tiled_png(dir.path(), 4);
    let cents = dir.path().join("c.json");
    let prog = dir.path().join("p.rpg");
    let out = dir.path().join("out.png");
    ok(&["detect", s(&img), "-o", s(&cents)]);
    ok(&["synth", s(&cents), "--image", s(&img), "-o", s(&prog)]);
    ok(&[
        "edit",
        s(&img),
        s(&prog),
        s(&cents),
        "--gain",
        "1",
        "-o",
        s(&out),
    ]);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&img).unwrap());
}

#[test]
fn inpaint_and_extrapolate_tiled_png() {
    let dir = tempfile::tempdir().unwrap();
    let img_path = tiled_png(dir.path(), 4);
    let prog = dir.path().join("p.rpg");
    ok(&["synth", s(&img_path), "-o", s(&prog)]);

    let mask = RasterImage::from_fn(64, 64, |x, y| {
        if (18..30).contains(&x) && (34..46).contains(&y) {
            [255, 255, 255]
        } else {
            [0, 0, 0]
        }
    });
    let mask_path = dir.path().join("mask.png");
    write_png(&mask_path, &mask).unwrap();
    let out = dir.path().join("filled.png");
    ok(&[
        "inpaint",
        s(&img_path),
        s(&mask_path),
        s(&prog),
        "-o",
        s(&out),
    ]);
    let filled = regprog::raster::read_png(&out).unwrap();
    let truth = regprog::raster::read_png(&img_path).unwrap();
    let bad: Vec<_> = (0..64u32)
        .flat_map(|y| (0..64u32).map(move |x| (x, y)))
        .filter(|&(x, y)| filled.raw(x, y) != truth.raw(x, y))
        .collect();
    assert!(
        bad.is_empty(),
        "{} wrong, first {:?}; program:\n{}",
        bad.len(),
        &bad[..bad.len().min(8)],
        std::fs::read_to_string(&prog).unwrap()
    );

    let grown = dir.path().join("grown.png");
    let grown_prog = dir.path().join("grown.rpg");
    ok(&[
        "extrapolate",
        s(&img_path),
        s(&prog),
        "--right",
        "16",
        "-o",
        s(&grown),
        "--program-out",
        s(&grown_prog),
    ]);
    let g = regprog::raster::read_png(&grown).unwrap();
    assert_eq!(g, RasterImage::from_fn(80, 64, |x, y| ring(x % 16, y % 16)));
    let relaxed = parse(&std::fs::read_to_string(&grown_prog).unwrap()).unwrap();
    assert_eq!(execute(&relaxed, Bounds::new(80, 64)).len(), 20);
}

#[test]
fn render_draws_lattice_and_hull() {
    let dir = tempfile::tempdir().unwrap();
    let prog = write(dir.path(), "p.rpg", GRID_2X2);
    let cents = dir.path().join("c.json");
    ok(&["exec", s(&prog), "--bounds", "30x30", "-o", s(&cents)]);
    let svg = String::from_utf8(ok(&["render", s(&cents), s(&prog)]).stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches(r#"class="lattice" cx"#).count(), 4);
    assert_eq!(svg.matches(r#"class="detected" cx"#).count(), 4);
    assert!(svg.contains(r#"<polygon class="hull" points="0,0 10,0 10,10 0,10""#));
}

#[test]
fn errors_are_json_and_classified() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.rpg");
    let e = error_json(&regprog(&["exec", s(&missing), "--bounds", "10x10"]));
    assert_eq!(e["code"], "file_error");
    assert!(e["detail"]["path"].as_str().unwrap().ends_with("nope.rpg"));

    let bad = write(dir.path(), "bad.rpg", "Draw(x=1, y=2)\n");
    let out = regprog(&["exec", s(&bad), "--bounds", "10x10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["code"], "schema_error");

    let few = write(
        dir.path(),
        "few.json",
        r#"{"width": 50, "height": 50, "points": [{"x": 1, "y": 1}, {"x": 20, "y": 1}]}"#,
    );
    let out = regprog(&["synth", s(&few)]);
    assert_eq!(out.status.code(), Some(1));
    let e = error_json(&out);
    assert_eq!(e["code"], "insufficient_centroids");
    assert_eq!(e["detail"]["found"], 2);

    let outside = write(
        dir.path(),
        "out.json",
        r#"{"width": 5, "height": 5, "points": [{"x": 9, "y": 1}]}"#,
    );
    assert_eq!(
        error_json(&regprog(&["synth", s(&outside)]))["code"],
        "schema_error"
    );

    let flat = dir.path().join("flat.png");
    write_png(&flat, &RasterImage::filled(48, 48, [9, 9, 9])).unwrap();
    assert_eq!(
        error_json(&regprog(&["detect", s(&flat)]))["code"],
        "no_dominant_displacement"
    );

    let e = error_json(&regprog(&["exec", s(&bad), "--bounds", "ten"]));
    assert_eq!(e["code"], "usage_error");
    let e = error_json(
        &Command::new(env!("CARGO_BIN_EXE_regprog"))
            .env("RS_THREADS", "0")
            .args(["exec", s(&bad), "--bounds", "1x1"])
            .output()
            .unwrap(),
    );
    assert_eq!(e["code"], "usage_error");
}

#[test]
fn commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let img = tiled_png(dir.path(), 4);
    let a = ok(&["detect", s(&img)]).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_regprog"))
        .args(["detect", s(&img)])
        .env("RS_THREADS", "1")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a, b);
}
