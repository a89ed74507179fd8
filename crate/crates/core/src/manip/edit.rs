use serde::{Deserialize, Serialize};

use super::inpaint::{plan_inpaint, run_plan};
use super::{EditPlan, ManipError, PlanKind};
use crate::dsl::{execute, Bounds, DrawCommand, RegularityProgram};
use crate::geometry::{assign_costs, nearest_labels, CentroidSet, Point2};
use crate::raster::RasterImage;
use crate::scalar::Scalar;

/// Offset of one detected centroid from its program draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Displacement {
    pub centroid: usize,
    /// Index into the program's draw list.
    pub draw: usize,
    pub ideal: Point2<f64>,
    /// Detected minus ideal.
    pub vector: Point2<f64>,
}

impl Displacement {
    pub fn detected(&self) -> Point2<f64> {
        Point2::new(self.ideal.x + self.vector.x, self.ideal.y + self.vector.y)
    }

    /// `ideal + gain * vector`.
    pub fn target(&self, gain: f64) -> Point2<f64> {
        Point2::new(
            self.ideal.x + gain * self.vector.x,
            self.ideal.y + gain * self.vector.y,
        )
    }
}

/// One displacement per matched centroid, sorted by centroid index.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DisplacementField {
    pub entries: Vec<Displacement>,
}

impl DisplacementField {
    /// Matches detected centroids one-to-one to draws by minimum total
    /// squared distance.
    pub fn between(detected: &[Point2<f64>], draws: &[DrawCommand]) -> Self {
        if detected.is_empty() || draws.is_empty() {
            return Self::default();
        }
        let ideal: Vec<Point2<f64>> = draws.iter().map(|d| d.position.to_f64()).collect();
        let nearest: Vec<usize> = detected
            .iter()
            .map(|p| {
                (0..ideal.len())
                    .min_by(|&a, &b| p.dist2(&ideal[a]).total_cmp(&p.dist2(&ideal[b])))
                    .unwrap_or(0)
            })
            .collect();
        let mut seen = vec![false; ideal.len()];
        let injective = nearest
            .iter()
            .all(|&d| !std::mem::replace(&mut seen[d], true));
        let matched: Vec<Option<usize>> = if injective {
            nearest.into_iter().map(Some).collect()
        } else {
            assign_costs(detected.len(), ideal.len(), |r, c| {
                detected[r].dist2(&ideal[c])
            })
        };
        let entries = matched
            .into_iter()
            .enumerate()
            .filter_map(|(k, d)| {
                d.map(|d| Displacement {
                    centroid: k,
                    draw: d,
                    ideal: ideal[d],
                    vector: Point2::new(detected[k].x - ideal[d].x, detected[k].y - ideal[d].y),
                })
            })
            .collect();
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct RegularityEdit {
    pub image: RasterImage,
    pub field: DisplacementField,
    /// Integer translation applied to each detected centroid's cell.
    pub shifts: Vec<(i64, i64)>,
    /// Detected centroids after their cells moved.
    pub moved: Vec<Point2<f64>>,
    pub plan: EditPlan,
}

/// Scales every displacement by `gain` and moves each detected centroid's
/// cell rigidly by the rounded change. Cells are pasted in centroid order, so
/// where moved cells overlap the later one wins. Uncovered pixels become
/// holes and are inpainted from draws at the moved positions.
///
/// `gain = 1` leaves the image unchanged, `gain = 0` snaps every matched
/// centroid to its draw (up to rounding of sub-pixel detections).
pub fn edit_regularity<T: Scalar>(
    image: &RasterImage,
    program: &RegularityProgram,
    detected: &CentroidSet<T>,
    gain: f64,
) -> Result<RegularityEdit, ManipError> {
    if !gain.is_finite() {
        return Err(ManipError::InvalidInput(format!(
            "gain must be finite, got {gain}"
        )));
    }
    let (w, h) = (image.width(), image.height());
    if (detected.width(), detected.height()) != (w, h) {
        return Err(ManipError::InvalidInput(format!(
            "centroids are in a {}x{} frame but the image is {w}x{h}",
            detected.width(),
            detected.height()
        )));
    }
    let draws = execute(program, Bounds::new(w, h));
    if draws.is_empty() {
        return Err(ManipError::InvalidInput(
            "program draws nothing inside the image".into(),
        ));
    }
    let points: Vec<Point2<f64>> = detected.points().iter().map(|p| p.to_f64()).collect();
    let field = DisplacementField::between(&points, &draws);

    let mut shifts = vec![(0i64, 0i64); points.len()];
    for e in &field.entries {
        let t = e.target(gain);
        let p = points[e.centroid];
        shifts[e.centroid] = ((t.x - p.x).round() as i64, (t.y - p.y).round() as i64);
    }
    let moved: Vec<Point2<f64>> = points
        .iter()
        .zip(&shifts)
        .map(|(p, s)| Point2::new(p.x + s.0 as f64, p.y + s.1 as f64))
        .collect();

    if shifts.iter().all(|&s| s == (0, 0)) && image.is_complete() {
        return Ok(RegularityEdit {
            image: image.clone(),
            field,
            shifts,
            moved,
            plan: EditPlan {
                kind: PlanKind::Edit,
                tasks: Vec::new(),
            },
        });
    }

    let labels = nearest_labels(&points, w, h);
    let mut cells: Vec<Vec<(u32, u32)>> = vec![Vec::new(); points.len()];
    for y in 0..h {
        for x in 0..w {
            cells[labels.get(x, y) as usize].push((x, y));
        }
    }
    let mut out = RasterImage::empty(w, h);
    for (cell, &(dx, dy)) in cells.iter().zip(&shifts) {
        for &(x, y) in cell {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if !out.in_bounds(nx, ny) {
                continue;
            }
            match image.get(x as i64, y as i64) {
                Some(v) => out.set(nx as u32, ny as u32, v),
                None => out.punch(nx as u32, ny as u32),
            }
        }
    }

    let mut moved_draws = draws.clone();
    for e in &field.entries {
        moved_draws[e.draw].position = moved[e.centroid].round();
    }
    let plan = plan_inpaint(&out, &moved_draws, PlanKind::Edit);
    let image = if moved_draws.len() < 2 {
        out.diffuse_holes();
        out
    } else {
        run_plan(&out, &moved_draws, &plan)?
    };
    Ok(RegularityEdit {
        image,
        field,
        shifts,
        moved,
        plan,
    })
}
