use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::inpaint::{plan_inpaint, run_plan};
use super::{EditPlan, ManipError, PlanKind};
use crate::dsl::{execute, Bounds, DrawCommand, LinearExpr, RegularityProgram};
use crate::geometry::{nearest_labels, LatticeIndex};
use crate::raster::RasterImage;

/// A bound of the program's index region, written as `g(i, j) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    OuterLo,
    OuterHi,
    InnerLo,
    InnerHi,
    /// Position in the program's condition list.
    Condition(usize),
}

impl Constraint {
    pub fn is_loop_bound(&self) -> bool {
        !matches!(self, Constraint::Condition(_))
    }

    fn all(program: &RegularityProgram) -> Vec<Constraint> {
        let mut v = vec![
            Constraint::OuterHi,
            Constraint::OuterLo,
            Constraint::InnerHi,
            Constraint::InnerLo,
        ];
        v.extend((0..program.conditions().len()).map(Constraint::Condition));
        v
    }

    fn slack(&self, program: &RegularityProgram) -> LinearExpr {
        match *self {
            Constraint::OuterLo => LinearExpr::new(1, 0, -program.outer().lo),
            Constraint::OuterHi => LinearExpr::new(-1, 0, program.outer().hi - 1),
            Constraint::InnerLo => LinearExpr::new(0, 1, -program.inner().lo),
            Constraint::InnerHi => LinearExpr::new(0, -1, program.inner().hi - 1),
            Constraint::Condition(k) => program.conditions()[k],
        }
    }

    /// The program with this constraint loosened by `delta` index steps.
    pub fn relax(
        &self,
        program: &RegularityProgram,
        delta: i64,
    ) -> Result<RegularityProgram, ManipError> {
        let (mut outer, mut inner) = (program.outer(), program.inner());
        let mut conditions = program.conditions().to_vec();
        match *self {
            Constraint::OuterLo => outer.lo -= delta,
            Constraint::OuterHi => outer.hi += delta,
            Constraint::InnerLo => inner.lo -= delta,
            Constraint::InnerHi => inner.hi += delta,
            Constraint::Condition(k) => {
                let c = conditions.get_mut(k).ok_or_else(|| {
                    ManipError::InvalidInput(format!(
                        "condition {k} out of range; the program has {}",
                        program.conditions().len()
                    ))
                })?;
                c.constant += delta;
            }
        }
        Ok(RegularityProgram::new(
            outer,
            inner,
            conditions,
            program.x(),
            program.y(),
            program.attribute(),
        )?)
    }
}

/// How to grow the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Extension {
    /// Enlarge the canvas by the given margins and relax the program until
    /// no more draws fit.
    Canvas {
        left: u32,
        right: u32,
        top: u32,
        bottom: u32,
    },
    /// Loosen one constraint on the current canvas.
    Relax { constraint: Constraint, delta: i64 },
}

impl Extension {
    pub fn right(px: u32) -> Self {
        Extension::Canvas {
            left: 0,
            right: px,
            top: 0,
            bottom: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Extrapolation {
    pub image: RasterImage,
    /// The relaxed program in the output frame.
    pub program: RegularityProgram,
    /// Draws of the relaxed program that the input program lacked.
    pub added: Vec<DrawCommand>,
    /// Constraints loosened by one step, in order.
    pub relaxed: Vec<Constraint>,
    pub plan: EditPlan,
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
    Top,
    Bottom,
}

impl Side {
    fn direction(self) -> (f64, f64) {
        match self {
            Side::Left => (-1.0, 0.0),
            Side::Right => (1.0, 0.0),
            Side::Top => (0.0, -1.0),
            Side::Bottom => (0.0, 1.0),
        }
    }

    fn distance(self, p: (i64, i64), w: u32, h: u32) -> f64 {
        (match self {
            Side::Left => p.0,
            Side::Right => w as i64 - 1 - p.0,
            Side::Top => p.1,
            Side::Bottom => h as i64 - 1 - p.1,
        }) as f64
    }
}

/// Pixel-space outward normal of `slack >= 0` under the program's lattice.
fn outward_normal(program: &RegularityProgram, slack: LinearExpr) -> Option<(f64, f64)> {
    let (a, s, h) = (
        program.x().coef_i as f64,
        program.x().coef_j as f64,
        program.y().coef_j as f64,
    );
    if a == 0.0 || h == 0.0 {
        return None;
    }
    let (gi, gj) = (slack.coef_i as f64, slack.coef_j as f64);
    let n = (-gi / a, s * gi / (a * h) - gj / h);
    let len = n.0.hypot(n.1);
    (len > 0.0).then(|| (n.0 / len, n.1 / len))
}

/// Constraints facing `side`, nearest first; ties favour loop bounds.
fn candidates(
    program: &RegularityProgram,
    draws: &[DrawCommand],
    side: Side,
    w: u32,
    h: u32,
) -> Vec<Constraint> {
    let dir = side.direction();
    let mut scored: Vec<(f64, bool, usize, Constraint)> = Vec::new();
    for (order, c) in Constraint::all(program).into_iter().enumerate() {
        let slack = c.slack(program);
        let Some(n) = outward_normal(program, slack) else {
            continue;
        };
        if n.0 * dir.0 + n.1 * dir.1 < 0.5 {
            continue;
        }
        let Some(tight) = draws.iter().map(|d| slack.eval(d.index)).min() else {
            continue;
        };
        let edge: Vec<f64> = draws
            .iter()
            .filter(|d| slack.eval(d.index) == tight)
            .map(|d| side.distance((d.position.x, d.position.y), w, h))
            .collect();
        let mean = edge.iter().sum::<f64>() / edge.len() as f64;
        scored.push((mean, !c.is_loop_bound(), order, c));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    scored.into_iter().map(|s| s.3).collect()
}

fn translated(
    program: &RegularityProgram,
    dx: i64,
    dy: i64,
) -> Result<RegularityProgram, ManipError> {
    let (mut x, mut y) = (program.x(), program.y());
    x.constant += dx;
    y.constant += dy;
    Ok(RegularityProgram::new(
        program.outer(),
        program.inner(),
        program.conditions().to_vec(),
        x,
        y,
        program.attribute(),
    )?)
}

fn indices(draws: &[DrawCommand]) -> HashSet<LatticeIndex> {
    draws.iter().map(|d| d.index).collect()
}

const MAX_RELAXATIONS: usize = 100_000;

/// Grows the pattern by relaxing the program and paints the new objects as
/// recurrent inpainting, nearest to the original frame first. Pixels of the
/// input are kept; new canvas area not owned by any object is diffused.
pub fn extrapolate(
    image: &RasterImage,
    program: &RegularityProgram,
    extension: Extension,
) -> Result<Extrapolation, ManipError> {
    let (w0, h0) = (image.width(), image.height());
    let original = execute(program, Bounds::new(w0, h0));
    let (canvas, relaxed_program, relaxed, offset) = match extension {
        Extension::Canvas {
            left,
            right,
            top,
            bottom,
        } => {
            if left + right + top + bottom == 0 {
                return Ok(Extrapolation {
                    image: image.clone(),
                    program: program.clone(),
                    added: Vec::new(),
                    relaxed: Vec::new(),
                    plan: EditPlan {
                        kind: PlanKind::Extrapolate,
                        tasks: Vec::new(),
                    },
                });
            }
            let canvas = image.padded(left, right, top, bottom);
            let (w, h) = (canvas.width(), canvas.height());
            let bounds = Bounds::new(w, h);
            let mut p = translated(program, left as i64, top as i64)?;
            let mut draws = execute(&p, bounds);
            let mut relaxed = Vec::new();
            let sides: Vec<Side> = [
                (right, Side::Right),
                (left, Side::Left),
                (bottom, Side::Bottom),
                (top, Side::Top),
            ]
            .into_iter()
            .filter(|(px, _)| *px > 0)
            .map(|(_, s)| s)
            .collect();
            'grow: while relaxed.len() < MAX_RELAXATIONS {
                for &side in &sides {
                    for c in candidates(&p, &draws, side, w, h) {
                        let Ok(next) = c.relax(&p, 1) else {
                            continue;
                        };
                        let next_draws = execute(&next, bounds);
                        if next_draws.len() > draws.len() {
                            p = next;
                            draws = next_draws;
                            relaxed.push(c);
                            continue 'grow;
                        }
                    }
                }
                break;
            }
            (canvas, p, relaxed, (left as i64, top as i64))
        }
        Extension::Relax { constraint, delta } => {
            if delta == 0 {
                return Err(ManipError::NoNewDraws);
            }
            let p = constraint.relax(program, delta)?;
            (image.clone(), p, vec![constraint], (0, 0))
        }
    };
    let (w, h) = (canvas.width(), canvas.height());
    let draws = execute(&relaxed_program, Bounds::new(w, h));
    let old = indices(&original);
    let added: Vec<DrawCommand> = draws
        .iter()
        .filter(|d| !old.contains(&d.index))
        .copied()
        .collect();
    if added.is_empty() {
        return Err(ManipError::NoNewDraws);
    }

    let mut canvas = canvas;
    if let Extension::Relax { .. } = extension {
        punch_new_objects(&mut canvas, &draws, &old, &relaxed_program);
    }

    let frame = (
        offset.0,
        offset.1,
        offset.0 + w0 as i64 - 1,
        offset.1 + h0 as i64 - 1,
    );
    let frame_distance = |d: &DrawCommand| {
        let dx = (frame.0 - d.position.x).max(d.position.x - frame.2).max(0) as f64;
        let dy = (frame.1 - d.position.y).max(d.position.y - frame.3).max(0) as f64;
        dx.hypot(dy)
    };
    let mut plan = plan_inpaint(&canvas, &draws, PlanKind::Extrapolate);
    // stable: keeps the hole-count order within equal distances
    plan.tasks
        .sort_by(|a, b| frame_distance(&a.target).total_cmp(&frame_distance(&b.target)));
    let out = run_plan(&canvas, &draws, &plan)?;
    Ok(Extrapolation {
        image: out,
        program: relaxed_program,
        added,
        relaxed,
        plan,
    })
}

/// Turns the part of each new object's cell within one lattice step of its
/// draw into holes.
fn punch_new_objects(
    canvas: &mut RasterImage,
    draws: &[DrawCommand],
    old: &HashSet<LatticeIndex>,
    program: &RegularityProgram,
) {
    let (w, h) = (canvas.width(), canvas.height());
    let x = program.x();
    let y = program.y();
    let reach = (x.coef_i as f64)
        .abs()
        .max((x.coef_j as f64).hypot(y.coef_j as f64));
    let sites: Vec<_> = draws.iter().map(|d| d.position).collect();
    let labels = nearest_labels(&sites, w, h);
    for (k, d) in draws.iter().enumerate() {
        if old.contains(&d.index) {
            continue;
        }
        let r = reach.ceil() as i64;
        for py in (d.position.y - r).max(0)..=(d.position.y + r).min(h as i64 - 1) {
            for px in (d.position.x - r).max(0)..=(d.position.x + r).min(w as i64 - 1) {
                let (dx, dy) = ((px - d.position.x) as f64, (py - d.position.y) as f64);
                if dx.hypot(dy) <= reach && labels.get(px as u32, py as u32) as usize == k {
                    canvas.punch(px as u32, py as u32);
                }
            }
        }
    }
}
