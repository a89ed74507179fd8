use serde::{Deserialize, Serialize};

use super::{DrawCommand, RegularityProgram};
use crate::geometry::LatticeIndex;

/// Image extent in pixels; valid positions are `[0, width) x [0, height)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub width: u32,
    pub height: u32,
}

impl Bounds {
    pub const fn new(width: u32, height: u32) -> Self {
        Self { width, height }
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64
    }
}

/// Runs the program: every admitted `(i, j)` whose draw lands inside
/// `bounds`, in `(i, j)` order.
pub fn execute(program: &RegularityProgram, bounds: Bounds) -> Vec<DrawCommand> {
    let mut out = Vec::new();
    for i in program.outer().lo..program.outer().hi {
        for j in program.inner().lo..program.inner().hi {
            let index = LatticeIndex::new(i, j);
            if !program.conditions().iter().all(|c| c.eval(index) >= 0) {
                continue;
            }
            let position = program.position(index);
            if !bounds.contains(position.x, position.y) {
                continue;
            }
            let attribute = program.attribute().eval(index);
            debug_assert!(
                attribute >= 0,
                "validated programs yield non-negative attributes"
            );
            out.push(DrawCommand {
                position,
                attribute: attribute.max(0) as u32,
                index,
            });
        }
    }
    out
}
