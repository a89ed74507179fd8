use proptest::prelude::*;
use regprog::dsl::{AttributeExpr, LinearExpr, LoopRange, RegularityProgram};
use regprog::manip::inpaint;
use regprog::raster::{Mask, RasterImage, Rgb};

fn tile(x: u32, y: u32) -> Rgb {
    let (dx, dy) = (x as i32 - 6, y as i32 - 6);
    if dx * dx + dy * dy <= 12 {
        [200, 40 + 10 * x as u8, 30]
    } else {
        [10, 20, 30 + 5 * y as u8]
    }
}

fn grid_program(n: i64) -> RegularityProgram {
    RegularityProgram::new(
        LoopRange::new(0, n),
        LoopRange::new(0, n),
        vec![],
        LinearExpr::new(12, 0, 6),
        LinearExpr::new(0, 12, 6),
        AttributeExpr::Constant,
    )
    .unwrap()
}

fn tiled(n: u32) -> RasterImage {
    RasterImage::from_fn(12 * n, 12 * n, |x, y| tile(x % 12, y % 12))
}

fn erase(img: &mut RasterImage, rects: &[(u32, u32, u32, u32)]) -> Mask {
    let mut mask = Mask::new(img.width(), img.height(), false);
    for &(x0, y0, w, h) in rects {
        for y in y0..(y0 + h).min(img.height()) {
            for x in x0..(x0 + w).min(img.width()) {
                img.punch(x, y);
                mask.set(x, y, true);
            }
        }
    }
    mask
}

#[test]
fn adjacent_objects_independent_of_thread_count() {
    let truth = tiled(5);
    let mut img = truth.clone();
    let mask = erase(&mut img, &[(12, 12, 24, 12)]);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| inpaint(&img, &grid_program(5)).unwrap())
    };
    let one = run(1);
    for t in [2, 4, 7] {
        assert_eq!(run(t), one);
    }
    assert_eq!(one.mean_l1(&truth, &mask), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn known_pixels_untouched_and_idempotent(
        rects in prop::collection::vec((0u32..60, 0u32..60, 1u32..14, 1u32..14), 1..4),
    ) {
        let truth = tiled(5);
        let mut img = truth.clone();
        let mask = erase(&mut img, &rects);
        let out = inpaint(&img, &grid_program(5)).unwrap();
        prop_assert!(out.is_complete());
        for y in 0..60 {
            for x in 0..60 {
                if !mask.get(x, y) {
                    prop_assert_eq!(out.raw(x, y), truth.raw(x, y));
                }
            }
        }
        prop_assert_eq!(out.mean_l1(&truth, &mask), 0.0);
        prop_assert_eq!(inpaint(&out, &grid_program(5)).unwrap(), out);
    }
}
