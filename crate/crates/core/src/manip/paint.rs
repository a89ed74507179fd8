use rayon::prelude::*;

use super::ManipError;
use crate::raster::{AggregationStack, RasterImage, Rgb};

/// Softmax temperature for layer weights (distances are in `[0, 1]`).
pub const TEMPERATURE: f64 = 0.05;

/// Pixels painted by one stack, plus the hole pixels no layer covers.
pub(crate) struct Fill {
    pub painted: Vec<(u32, u32, Rgb)>,
    pub uncovered: Vec<(u32, u32)>,
}

/// Mean absolute difference (scaled to `[0, 1]`) between each layer and the
/// base over the known pixels of the target cell. Layers sharing no such
/// pixel get distance 1.
pub(crate) fn ring_distances(stack: &AggregationStack) -> Vec<f64> {
    let base = &stack.base;
    let ring: Vec<(u32, u32)> = stack
        .cell
        .iter_set()
        .filter(|&(x, y)| base.is_valid(x, y))
        .collect();
    stack
        .layers
        .par_iter()
        .map(|layer| {
            let mut sum = 0u64;
            let mut n = 0u64;
            for &(x, y) in &ring {
                if let Some(v) = layer.get(x as i64, y as i64) {
                    let b = base.raw(x, y);
                    for c in 0..3 {
                        sum += (v[c] as i32 - b[c] as i32).unsigned_abs() as u64;
                    }
                    n += 1;
                }
            }
            if n == 0 {
                1.0
            } else {
                sum as f64 / (n as f64 * 3.0 * 255.0)
            }
        })
        .collect()
}

pub(crate) fn layer_weights(distances: &[f64], temperature: f64) -> Vec<f64> {
    let dmin = distances.iter().copied().fold(f64::INFINITY, f64::min);
    distances
        .iter()
        .map(|d| (-(d - dmin) / temperature).exp())
        .collect()
}

pub(crate) fn paint(stack: &AggregationStack) -> Fill {
    let weights = layer_weights(&ring_distances(stack), TEMPERATURE);
    let holes: Vec<(u32, u32)> = stack
        .cell
        .iter_set()
        .filter(|&(x, y)| !stack.base.is_valid(x, y))
        .collect();
    let results: Vec<Result<(u32, u32, Rgb), (u32, u32)>> = holes
        .par_iter()
        .map(|&(x, y)| {
            let mut acc = [0.0f64; 3];
            let mut total = 0.0;
            for (layer, &w) in stack.layers.iter().zip(&weights) {
                if let Some(v) = layer.get(x as i64, y as i64) {
                    for c in 0..3 {
                        acc[c] += w * v[c] as f64;
                    }
                    total += w;
                }
            }
            if total == 0.0 {
                return Err((x, y));
            }
            let px = acc.map(|a| (a / total).round().clamp(0.0, 255.0) as u8);
            Ok((x, y, px))
        })
        .collect();
    let mut fill = Fill {
        painted: Vec::with_capacity(results.len()),
        uncovered: Vec::new(),
    };
    for r in results {
        match r {
            Ok(p) => fill.painted.push(p),
            Err(p) => fill.uncovered.push(p),
        }
    }
    fill
}

/// Fills the hole pixels of the stack's target cell with a weighted blend
/// of the layers valid there. A layer's weight is `exp(-(d - d_min) / τ)`
/// where `d` is its distance to the known pixels of the cell. Known pixels
/// are left untouched.
pub fn composite_paint(stack: &AggregationStack) -> Result<RasterImage, ManipError> {
    let fill = paint(stack);
    if !fill.uncovered.is_empty() {
        return Err(ManipError::Uncovered {
            count: fill.uncovered.len(),
            pixels: fill.uncovered.into_iter().take(16).collect(),
        });
    }
    let mut out = (*stack.base).clone();
    for (x, y, v) in fill.painted {
        out.set(x, y, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::DrawCommand;
    use crate::geometry::{LatticeIndex, Point2};
    use crate::raster::{build_stack, Mask};

    fn draws(n: i64, spacing: i64) -> Vec<DrawCommand> {
        (0..n)
            .flat_map(|i| {
                (0..n).map(move |j| DrawCommand {
                    position: Point2::new(spacing / 2 + spacing * i, spacing / 2 + spacing * j),
                    attribute: 0,
                    index: LatticeIndex::new(i, j),
                })
            })
            .collect()
    }

    fn tile(x: u32, y: u32) -> Rgb {
        [
            (x * 31 % 256) as u8,
            (y * 17 % 256) as u8,
            ((x + 2 * y) * 9 % 256) as u8,
        ]
    }

    fn erase(img: &mut RasterImage, x0: u32, y0: u32, size: u32) -> Mask {
        let mut m = Mask::new(img.width(), img.height(), false);
        for y in y0..y0 + size {
            for x in x0..x0 + size {
                img.punch(x, y);
                m.set(x, y, true);
            }
        }
        m
    }

    #[test]
    fn tiled_hole_is_exact() {
        let truth = RasterImage::from_fn(40, 40, |x, y| tile(x % 10, y % 10));
        let mut img = truth.clone();
        erase(&mut img, 12, 13, 6);
        let d = draws(4, 10);
        let target = d
            .iter()
            .position(|c| c.index == LatticeIndex::new(1, 1))
            .unwrap();
        let out = composite_paint(&build_stack(&img, &d, target).unwrap()).unwrap();
        assert_eq!(out, truth);
    }

    #[test]
    fn single_layer_copies() {
        let mut img = RasterImage::from_fn(20, 10, |x, y| [x as u8 * 10, y as u8, 7]);
        erase(&mut img, 2, 3, 3);
        let d = &draws(2, 10)[..];
        let pair = [d[0], d[2]];
        let stack = build_stack(&img, &pair, 0).unwrap();
        let out = composite_paint(&stack).unwrap();
        for y in 3..6 {
            for x in 2..5 {
                assert_eq!(out.get(x, y), img.get(x + 10, y));
            }
        }
        assert_eq!(out.get(0, 0), img.get(0, 0));
    }

    #[test]
    fn uncovered_reported() {
        let mut img = RasterImage::filled(20, 10, [1; 3]);
        erase(&mut img, 1, 0, 3);
        erase(&mut img, 11, 0, 3);
        let d = &draws(2, 10)[..];
        let pair = [d[0], d[2]];
        let err = composite_paint(&build_stack(&img, &pair, 0).unwrap()).unwrap_err();
        assert!(matches!(err, ManipError::Uncovered { count: 9, .. }));
        assert!(err.to_string().starts_with("uncovered hole pixel"));
    }

    #[test]
    fn brightness_noise_bounded() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let offsets: Vec<i32> = (0..16).map(|_| rng.gen_range(-5..=5)).collect();
        let truth = RasterImage::from_fn(40, 40, |x, y| {
            let o = offsets[(y / 10 * 4 + x / 10) as usize];
            tile(x % 10, y % 10).map(|v| (v as i32 + o).clamp(0, 255) as u8)
        });
        let mut img = truth.clone();
        erase(&mut img, 20, 10, 10);
        let d = draws(4, 10);
        let target = d
            .iter()
            .position(|c| c.index == LatticeIndex::new(2, 1))
            .unwrap();
        let stack = build_stack(&img, &d, target).unwrap();
        let painted = stack.region();
        assert_eq!(painted.count(), 81);
        let out = composite_paint(&stack).unwrap();
        assert!(out.mean_l1(&truth, &painted) <= 5.0);
    }

    #[test]
    fn weights_prefer_matching_layers() {
        let w = layer_weights(&[0.0, 0.05, 1.0], TEMPERATURE);
        assert_eq!(w[0], 1.0);
        assert!((w[1] - (-1.0f64).exp()).abs() < 1e-12);
        assert!(w[2] < 1e-8);
    }
}
