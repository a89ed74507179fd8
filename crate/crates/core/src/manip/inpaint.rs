use std::sync::Arc;

use super::paint::paint;
use super::{EditPlan, ManipError, PlanKind, PlanTask};
use crate::dsl::{execute, Bounds, DrawCommand, RegularityProgram};
use crate::geometry::nearest_labels;
use crate::raster::{attribute_filter, build_stack_with_cells, Mask, RasterImage};

/// Groups the image's pixels into nearest-draw cells and lists the cells
/// holding holes, most holes first (ties by lattice index).
pub fn plan_inpaint(image: &RasterImage, draws: &[DrawCommand], kind: PlanKind) -> EditPlan {
    if draws.is_empty() || image.is_complete() {
        return EditPlan {
            kind,
            tasks: Vec::new(),
        };
    }
    let (w, h) = (image.width(), image.height());
    let sites: Vec<_> = draws.iter().map(|d| d.position).collect();
    let labels = nearest_labels(&sites, w, h);
    let mut cells: Vec<Vec<(u32, u32)>> = vec![Vec::new(); draws.len()];
    let mut holes: Vec<Vec<(u32, u32)>> = vec![Vec::new(); draws.len()];
    for y in 0..h {
        for x in 0..w {
            let l = labels.get(x, y) as usize;
            cells[l].push((x, y));
            if !image.is_valid(x, y) {
                holes[l].push((x, y));
            }
        }
    }
    let mut tasks: Vec<PlanTask> = cells
        .into_iter()
        .zip(holes)
        .enumerate()
        .filter(|(_, (_, holes))| !holes.is_empty())
        .map(|(draw, (cell, holes))| PlanTask {
            draw,
            target: draws[draw],
            cell,
            holes,
        })
        .collect();
    tasks.sort_by(|a, b| {
        b.holes
            .len()
            .cmp(&a.holes.len())
            .then(a.target.index.cmp(&b.target.index))
    });
    EditPlan { kind, tasks }
}

/// Runs the plan's tasks in order, then diffuses whatever holes remain.
pub(crate) fn run_plan(
    image: &RasterImage,
    draws: &[DrawCommand],
    plan: &EditPlan,
) -> Result<RasterImage, ManipError> {
    let (w, h) = (image.width(), image.height());
    let mut current = image.clone();
    for task in &plan.tasks {
        let mut cell = Mask::new(w, h, false);
        for &(x, y) in &task.cell {
            cell.set(x, y, true);
        }
        let stack = build_stack_with_cells(Arc::new(current.clone()), draws, task.draw, cell)?;
        let stack = attribute_filter(&stack, task.target.attribute)?;
        for (x, y, v) in paint(&stack).painted {
            current.set(x, y, v);
        }
    }
    current.diffuse_holes();
    Ok(current)
}

/// Fills the image's holes object by object from the program's draws, then
/// diffuses leftover background holes. The output has no holes.
pub fn inpaint(
    image: &RasterImage,
    program: &RegularityProgram,
) -> Result<RasterImage, ManipError> {
    if image.is_complete() {
        return Ok(image.clone());
    }
    let draws = execute(program, Bounds::new(image.width(), image.height()));
    inpaint_draws(image, &draws)
}

/// [`inpaint`] with an explicit draw list.
pub fn inpaint_draws(
    image: &RasterImage,
    draws: &[DrawCommand],
) -> Result<RasterImage, ManipError> {
    if image.is_complete() {
        return Ok(image.clone());
    }
    if draws.is_empty() {
        return Err(ManipError::InvalidInput(
            "program draws nothing inside the image".into(),
        ));
    }
    let plan = plan_inpaint(image, draws, PlanKind::Inpaint);
    run_plan(image, draws, &plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{AttributeExpr, LinearExpr, LoopRange};
    use crate::geometry::LatticeIndex;
    use crate::raster::Rgb;

    fn grid(n: i64, a: i64, attribute: AttributeExpr) -> RegularityProgram {
        RegularityProgram::new(
            LoopRange::new(0, n),
            LoopRange::new(0, n),
            vec![],
            LinearExpr::new(a, 0, a / 2),
            LinearExpr::new(0, a, a / 2),
            attribute,
        )
        .unwrap()
    }

    fn tile(x: u32, y: u32) -> Rgb {
        let d = (x as i32 - 6).pow(2) + (y as i32 - 6).pow(2);
        if d <= 12 {
            [200, (x * 20) as u8, (y * 20) as u8]
        } else {
            [30, 60, (x + y) as u8]
        }
    }

    fn erase_object(img: &mut RasterImage, i: u32, j: u32, a: u32) {
        for y in j * a..(j + 1) * a {
            for x in i * a..(i + 1) * a {
                img.punch(x, y);
            }
        }
    }

    #[test]
    fn complete_image_is_identity() {
        let img = RasterImage::from_fn(36, 36, |x, y| tile(x % 12, y % 12));
        assert_eq!(
            inpaint(&img, &grid(3, 12, AttributeExpr::Constant)).unwrap(),
            img
        );
    }

    #[test]
    fn erased_object_restored() {
        let truth = RasterImage::from_fn(48, 48, |x, y| tile(x % 12, y % 12));
        let mut img = truth.clone();
        erase_object(&mut img, 2, 1, 12);
        let out = inpaint(&img, &grid(4, 12, AttributeExpr::Constant)).unwrap();
        assert_eq!(out, truth);
    }

    #[test]
    fn adjacent_objects_restored() {
        let truth = RasterImage::from_fn(48, 48, |x, y| tile(x % 12, y % 12));
        let mut img = truth.clone();
        erase_object(&mut img, 1, 1, 12);
        erase_object(&mut img, 2, 1, 12);
        let p = grid(4, 12, AttributeExpr::Constant);
        let plan = plan_inpaint(&img, &execute(&p, Bounds::new(48, 48)), PlanKind::Inpaint);
        assert_eq!(plan.tasks[0].target.index, LatticeIndex::new(1, 1));
        assert_eq!(plan.hole_count(), 288);
        assert_eq!(inpaint(&img, &p).unwrap(), truth);
    }

    #[test]
    fn attributes_select_sources() {
        let checker = AttributeExpr::Modulo {
            expr: LinearExpr::new(1, 1, 0),
            modulus: 2,
        };
        let truth = RasterImage::from_fn(48, 48, |x, y| {
            let t = tile(x % 12, y % 12);
            if (x / 12 + y / 12) % 2 == 0 {
                [t[1], t[0], t[2]]
            } else {
                t
            }
        });
        let mut img = truth.clone();
        erase_object(&mut img, 1, 2, 12);
        assert_eq!(inpaint(&img, &grid(4, 12, checker)).unwrap(), truth);
    }

    #[test]
    fn idempotent_and_keeps_known_pixels() {
        let truth = RasterImage::from_fn(50, 40, |x, y| tile(x % 12, y % 12));
        let mut img = truth.clone();
        for y in 20..40 {
            for x in 40..50 {
                img.punch(x, y);
            }
        }
        let p = grid(4, 12, AttributeExpr::Constant);
        let out = inpaint(&img, &p).unwrap();
        assert!(out.is_complete());
        for y in 0..40 {
            for x in 0..50 {
                if img.is_valid(x, y) {
                    assert_eq!(out.raw(x, y), img.raw(x, y));
                }
            }
        }
        assert_eq!(inpaint(&out, &p).unwrap(), out);
    }

    #[test]
    fn singleton_attribute_group_errors() {
        let lone = AttributeExpr::IsZeroBoth {
            first: LinearExpr::new(1, 0, -1),
            second: LinearExpr::new(0, 1, -1),
        };
        let mut img = RasterImage::from_fn(36, 36, |x, y| tile(x % 12, y % 12));
        erase_object(&mut img, 1, 1, 12);
        assert!(matches!(
            inpaint(&img, &grid(3, 12, lone)),
            Err(ManipError::Raster(_))
        ));
    }
}
