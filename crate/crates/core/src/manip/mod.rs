//! Program-guided manipulation. Every operation is recurrent inpainting: an
//! [`EditPlan`] lists target objects whose cells contain holes, and each task
//! paints its holes from an attribute-filtered aggregation stack built on the
//! image as completed so far.

mod edit;
mod extrapolate;
mod inpaint;
mod paint;

pub use edit::{edit_regularity, Displacement, DisplacementField, RegularityEdit};
pub use extrapolate::{extrapolate, Constraint, Extension, Extrapolation};
pub use inpaint::{inpaint, inpaint_draws, plan_inpaint};
pub use paint::{composite_paint, TEMPERATURE};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{DrawCommand, DslError};
use crate::raster::RasterError;

#[derive(Debug, Error)]
pub enum ManipError {
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error("uncovered hole pixel: {count} pixel(s) with no valid layer, first at {pixels:?}")]
    Uncovered {
        count: usize,
        pixels: Vec<(u32, u32)>,
    },
    #[error("no new draws in extension")]
    NoNewDraws,
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    Inpaint,
    Extrapolate,
    Edit,
}

/// One target object and the hole pixels of its cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanTask {
    /// Index into the draw list the plan was built from.
    pub draw: usize,
    pub target: DrawCommand,
    /// Every pixel of the target's nearest-draw cell.
    pub cell: Vec<(u32, u32)>,
    /// Hole pixels of the cell when the plan was made.
    pub holes: Vec<(u32, u32)>,
}

/// Tasks in execution order. Later tasks see the pixels painted by earlier
/// ones.
#[derive(Debug, Clone, PartialEq)]
pub struct EditPlan {
    pub kind: PlanKind,
    pub tasks: Vec<PlanTask>,
}

impl EditPlan {
    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn hole_count(&self) -> usize {
        self.tasks.iter().map(|t| t.holes.len()).sum()
    }
}
