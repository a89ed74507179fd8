use regprog::detect::{detect, DetectParams};
use regprog::dsl::{execute, Bounds};
use regprog::geometry::{LatticeIndex, Point2};
use regprog::manip::{edit_regularity, extrapolate, inpaint, Extension};
use regprog::raster::{Mask, RasterImage, Rgb};
use regprog::synth::{synthesize, SynthConfig};

fn cross(x: u32, y: u32) -> Rgb {
    let (dx, dy) = (x as i32 - 8, y as i32 - 8);
    if (dx.abs() <= 4 && dy.abs() <= 1) || (dy.abs() <= 4 && dx.abs() <= 1) {
        [240, 230, 20]
    } else {
        [20, 30, 90]
    }
}

fn tiled(nx: u32, ny: u32) -> RasterImage {
    RasterImage::from_fn(16 * nx, 16 * ny, |x, y| cross(x % 16, y % 16))
}

#[test]
fn missing_tile_is_interior_to_the_recovered_grid() {
    let img = RasterImage::from_fn(64, 64, |x, y| {
        if (x / 16, y / 16) == (1, 2) {
            [20, 30, 90]
        } else {
            cross(x % 16, y % 16)
        }
    });
    let found = detect(&img, &DetectParams::default()).unwrap();
    assert_eq!(found.centroids.len(), 15);
    let centroids = found.centroid_set().unwrap();
    let report = synthesize(&centroids, None, &SynthConfig::default()).unwrap();
    let draws = execute(&report.program, Bounds::new(64, 64));
    assert_eq!(draws.len(), 16);
    assert!(report.program.conditions().is_empty());
    let matched: Vec<LatticeIndex> = report.matches.iter().map(|m| m.1).collect();
    let missing: Vec<_> = draws
        .iter()
        .filter(|d| !matched.contains(&d.index))
        .collect();
    assert_eq!(missing.len(), 1);
    let p = missing[0].position;
    assert!((p.x - 24).abs() <= 2 && (p.y - 40).abs() <= 2, "{p:?}");
}

#[test]
fn detection_follows_translation() {
    let base = tiled(5, 5);
    let shift = (5u32, 11u32);
    let rolled = RasterImage::from_fn(80, 80, |x, y| {
        base.raw((x + 80 - shift.0) % 80, (y + 80 - shift.1) % 80)
    });
    let a = detect(&base, &DetectParams::default()).unwrap();
    let b = detect(&rolled, &DetectParams::default()).unwrap();
    let interior = |p: &Point2<f64>| p.x > 12.0 && p.y > 12.0 && p.x < 68.0 && p.y < 68.0;
    for q in b.centroids.iter().filter(|q| interior(q)) {
        let back = Point2::new(q.x - shift.0 as f64, q.y - shift.1 as f64);
        let near = a.centroids.iter().any(|p| {
            let dx = (back.x - p.x).rem_euclid(80.0);
            let dy = (back.y - p.y).rem_euclid(80.0);
            dx.min(80.0 - dx) <= 1.0 && dy.min(80.0 - dy) <= 1.0
        });
        assert!(near, "{q:?} has no counterpart");
    }
}

#[test]
fn sheared_lattice_detected() {
    // rows offset by half a period: basis (16, 0), (8, 16)
    let centres: Vec<(i64, i64)> = (0..6)
        .flat_map(|j| (0..5).map(move |i| (12 + 16 * i + 8 * (j % 2), 12 + 16 * j)))
        .collect();
    let img = RasterImage::from_fn(104, 104, |x, y| {
        centres
            .iter()
            .find(|c| (x as i64 - c.0).abs() <= 8 && (y as i64 - c.1).abs() <= 8)
            .map_or([20, 30, 90], |c| {
                cross((x as i64 - c.0 + 8) as u32, (y as i64 - c.1 + 8) as u32)
            })
    });
    let d = detect(&img, &DetectParams::default()).unwrap();
    assert_eq!(d.centroids.len(), 30);
    let lens: Vec<f64> = d.basis.iter().map(|v| v.0.hypot(v.1)).collect();
    assert!((lens[0] - 16.0).abs() < 1.0, "{:?}", d.basis);
    assert!((lens[1] - 17.9).abs() < 1.0, "{:?}", d.basis);
    let report = synthesize(&d.centroid_set().unwrap(), None, &SynthConfig::default()).unwrap();
    let draws = execute(&report.program, Bounds::new(104, 104));
    let mut got: Vec<(i64, i64)> = draws.iter().map(|d| (d.position.x, d.position.y)).collect();
    let mut want = centres.clone();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn detect_synth_inpaint() {
    let truth = tiled(5, 4);
    let centroids = detect(&truth, &DetectParams::default())
        .unwrap()
        .centroid_set()
        .unwrap();
    let report = synthesize(&centroids, Some(&truth), &SynthConfig::default()).unwrap();
    let mut img = truth.clone();
    let mut hole = Mask::new(80, 64, false);
    for y in 20..30 {
        for x in 35..60 {
            img.punch(x, y);
            hole.set(x, y, true);
        }
    }
    let out = inpaint(&img, &report.program).unwrap();
    assert_eq!(out.mean_l1(&truth, &hole), 0.0);
}

#[test]
fn extrapolate_and_edit_from_synthesized_program() {
    let img = tiled(3, 3);
    let centroids = detect(&img, &DetectParams::default())
        .unwrap()
        .centroid_set()
        .unwrap();
    let report = synthesize(&centroids, Some(&img), &SynthConfig::default()).unwrap();
    let grown = extrapolate(&img, &report.program, Extension::right(16)).unwrap();
    assert_eq!(grown.added.len(), 3);
    assert_eq!(grown.image, tiled(4, 3));
    let same = edit_regularity(&img, &report.program, &centroids, 1.0).unwrap();
    assert_eq!(same.image, img);
}
