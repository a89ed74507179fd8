use std::sync::Arc;

use super::{Mask, RasterError, RasterImage, Rgb};
use crate::dsl::DrawCommand;
use crate::geometry::nearest_labels;

/// The input image translated so that one source object sits on the target.
#[derive(Debug, Clone)]
pub struct StackLayer {
    pub source: DrawCommand,
    /// Translation applied to the image: target position minus source position.
    pub shift: (i64, i64),
    image: Arc<RasterImage>,
}

impl StackLayer {
    /// Layer value at `(x, y)`, `None` when the translated pixel is out of
    /// frame or a hole.
    pub fn get(&self, x: i64, y: i64) -> Option<Rgb> {
        self.image.get(x - self.shift.0, y - self.shift.1)
    }

    /// Materialized layer: same size as the base, out-of-frame pixels are
    /// holes with value 0.
    pub fn to_image(&self) -> RasterImage {
        self.image.translated(self.shift.0, self.shift.1)
    }
}

/// Corrupted image plus one translated copy per other object.
#[derive(Debug, Clone)]
pub struct AggregationStack {
    pub target: DrawCommand,
    pub base: Arc<RasterImage>,
    /// One layer per source object, ordered by source `(i, j)`.
    pub layers: Vec<StackLayer>,
    /// Pixels owned by the target object (its nearest-draw cell).
    pub cell: Mask,
}

impl AggregationStack {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Hole pixels of the base inside the target cell.
    pub fn region(&self) -> Mask {
        let mut m = Mask::new(self.base.width(), self.base.height(), false);
        for (x, y) in self.cell.iter_set() {
            if !self.base.is_valid(x, y) {
                m.set(x, y, true);
            }
        }
        m
    }
}

/// Builds the stack for `draws[target]`, taking its cell from the
/// nearest-draw partition of the image.
pub fn build_stack(
    image: &RasterImage,
    draws: &[DrawCommand],
    target: usize,
) -> Result<AggregationStack, RasterError> {
    if target >= draws.len() {
        return Err(RasterError::BadTarget(target));
    }
    if draws.len() < 2 {
        return Err(RasterError::NoSources);
    }
    let sites: Vec<_> = draws.iter().map(|d| d.position).collect();
    let labels = nearest_labels(&sites, image.width(), image.height());
    let mut cell = Mask::new(image.width(), image.height(), false);
    for (k, &l) in labels.labels.iter().enumerate() {
        if l as usize == target {
            cell.set(k as u32 % image.width(), k as u32 / image.width(), true);
        }
    }
    build_stack_with_cells(Arc::new(image.clone()), draws, target, cell)
}

/// Builds the stack with a caller-supplied target cell.
pub fn build_stack_with_cells(
    image: Arc<RasterImage>,
    draws: &[DrawCommand],
    target: usize,
    cell: Mask,
) -> Result<AggregationStack, RasterError> {
    if target >= draws.len() {
        return Err(RasterError::BadTarget(target));
    }
    if draws.len() < 2 {
        return Err(RasterError::NoSources);
    }
    image.check_dims(cell.width(), cell.height())?;
    let t = draws[target];
    let mut sources: Vec<DrawCommand> = draws
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != target)
        .map(|(_, d)| *d)
        .collect();
    sources.sort_by_key(|d| d.index);
    let layers = sources
        .into_iter()
        .map(|source| StackLayer {
            source,
            shift: (
                t.position.x - source.position.x,
                t.position.y - source.position.y,
            ),
            image: Arc::clone(&image),
        })
        .collect();
    Ok(AggregationStack {
        target: t,
        base: image,
        layers,
        cell,
    })
}

/// Keeps only layers whose source shares `target_attribute`.
pub fn attribute_filter(
    stack: &AggregationStack,
    target_attribute: u32,
) -> Result<AggregationStack, RasterError> {
    let layers: Vec<StackLayer> = stack
        .layers
        .iter()
        .filter(|l| l.source.attribute == target_attribute)
        .cloned()
        .collect();
    if layers.is_empty() {
        return Err(RasterError::NoSameAttributeSources);
    }
    Ok(AggregationStack {
        target: stack.target,
        base: Arc::clone(&stack.base),
        layers,
        cell: stack.cell.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{execute, AttributeExpr, Bounds, LinearExpr, LoopRange, RegularityProgram};
    use crate::geometry::{LatticeIndex, Point2};

    fn draw(x: i64, y: i64, i: i64, attribute: u32) -> DrawCommand {
        DrawCommand {
            position: Point2::new(x, y),
            attribute,
            index: LatticeIndex::new(i, 0),
        }
    }

    fn tile_pixel(x: u32, y: u32) -> Rgb {
        [
            (x * 29 % 251) as u8,
            (y * 53 % 241) as u8,
            ((x ^ y) * 7) as u8,
        ]
    }

    #[test]
    fn two_objects() {
        let img = RasterImage::from_fn(20, 10, |x, y| [x as u8, y as u8, 0]);
        let draws = [draw(4, 5, 0, 0), draw(14, 5, 1, 0)];
        let s = build_stack(&img, &draws, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.layers[0].shift, (-10, 0));
        assert_eq!(s.layers[0].to_image(), img.translated(-10, 0));
        assert_eq!(s.layers[0].get(4, 5), img.get(14, 5));
        assert!(s.cell.get(0, 0) && !s.cell.get(10, 0));
    }

    #[test]
    fn needs_two_draws() {
        let img = RasterImage::filled(4, 4, [0; 3]);
        assert!(matches!(
            build_stack(&img, &[draw(1, 1, 0, 0)], 0),
            Err(RasterError::NoSources)
        ));
        assert!(matches!(
            build_stack(&img, &[draw(1, 1, 0, 0)], 3),
            Err(RasterError::BadTarget(3))
        ));
    }

    #[test]
    fn tiled_layers_reproduce_hidden_tile() {
        let tile = 8;
        let truth = RasterImage::from_fn(24, 24, |x, y| tile_pixel(x % tile, y % tile));
        let mut img = truth.clone();
        for y in 8..16 {
            for x in 8..16 {
                img.punch(x, y);
            }
        }
        let p = RegularityProgram::new(
            LoopRange::new(0, 3),
            LoopRange::new(0, 3),
            vec![],
            LinearExpr::new(8, 0, 4),
            LinearExpr::new(0, 8, 4),
            AttributeExpr::Constant,
        )
        .unwrap();
        let draws = execute(&p, Bounds::new(24, 24));
        let target = draws
            .iter()
            .position(|d| d.index == LatticeIndex::new(1, 1))
            .unwrap();
        let s = build_stack(&img, &draws, target).unwrap();
        assert_eq!(s.len(), 8);
        for layer in &s.layers {
            for y in 8..16 {
                for x in 8..16 {
                    assert_eq!(layer.get(x, y), truth.get(x, y));
                }
            }
        }
        // layers ordered by source index
        let order: Vec<_> = s.layers.iter().map(|l| l.source.index).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);
    }

    #[test]
    fn mask_conservation() {
        let mut img = RasterImage::from_fn(12, 6, |x, y| [x as u8, y as u8, 1]);
        img.punch(9, 3);
        let draws = [draw(2, 3, 0, 0), draw(8, 3, 1, 0)];
        let s = build_stack(&img, &draws, 0).unwrap();
        let layer = s.layers[0].to_image();
        for y in 0..6i64 {
            for x in 0..12i64 {
                let src = (x + 6, y);
                let expect = img.get(src.0, src.1);
                assert_eq!(layer.get(x, y), expect);
            }
        }
    }

    #[test]
    fn equivariant_under_translation() {
        let img = RasterImage::from_fn(30, 10, |x, y| tile_pixel(x, y));
        let draws = [draw(5, 5, 0, 0), draw(12, 5, 1, 0), draw(19, 5, 2, 0)];
        let s = build_stack(&img, &draws, 1).unwrap();
        let moved = img.padded(3, 0, 2, 0);
        let moved_draws: Vec<_> = draws
            .iter()
            .map(|d| draw(d.position.x + 3, d.position.y + 2, d.index.i, 0))
            .collect();
        let s2 = build_stack(&moved, &moved_draws, 1).unwrap();
        for (a, b) in s.layers.iter().zip(&s2.layers) {
            assert_eq!(a.shift, b.shift);
            for y in 0..10 {
                for x in 0..30 {
                    assert_eq!(a.get(x, y), b.get(x + 3, y + 2));
                }
            }
        }
    }

    #[test]
    fn checkerboard_filter() {
        let p = RegularityProgram::new(
            LoopRange::new(0, 4),
            LoopRange::new(0, 4),
            vec![],
            LinearExpr::new(6, 0, 3),
            LinearExpr::new(0, 6, 3),
            AttributeExpr::Modulo {
                expr: LinearExpr::new(1, 1, 0),
                modulus: 2,
            },
        )
        .unwrap();
        let draws = execute(&p, Bounds::new(24, 24));
        let img = RasterImage::filled(24, 24, [9; 3]);
        let target = draws.iter().position(|d| d.attribute == 1).unwrap();
        let s = build_stack(&img, &draws, target).unwrap();
        assert_eq!(s.len(), 15);
        let f = attribute_filter(&s, 1).unwrap();
        assert_eq!(f.len(), 7);
        assert!(f.layers.iter().all(|l| l.source.attribute == 1));
        let all_same = attribute_filter(&s, 0).unwrap();
        assert_eq!(all_same.len(), 8);
    }

    #[test]
    fn singleton_group_fails() {
        let img = RasterImage::filled(20, 10, [0; 3]);
        let draws = [draw(4, 5, 0, 1), draw(14, 5, 1, 0)];
        let s = build_stack(&img, &draws, 0).unwrap();
        assert!(matches!(
            attribute_filter(&s, 1),
            Err(RasterError::NoSameAttributeSources)
        ));
        assert_eq!(attribute_filter(&s, 0).unwrap().len(), 1);
    }
}
