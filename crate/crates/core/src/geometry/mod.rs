//! Points, centroid sets, exact assignment, integer convex hulls and
//! nearest-centroid partitioning.

mod assignment;
mod hull;
mod point;
mod voronoi;

pub use assignment::{assign_costs, min_cost_assignment, Assignment};
pub use hull::{convex_hull, ConvexHull, HalfPlane, HullShape};
pub use point::{CentroidSet, LatticeIndex, Point2};
pub use voronoi::{nearest_labels, voronoi_partition, LabelMap};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("non-finite coordinate at point {0}")]
    NonFinite(usize),
    #[error("point {index} ({x}, {y}) lies outside the {width}x{height} image")]
    OutOfBounds {
        index: usize,
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },
    #[error("points {0} and {1} are closer than one pixel")]
    Duplicate(usize, usize),
    #[error("descriptor count {got} does not match point count {expected}")]
    DescriptorCount { expected: usize, got: usize },
    #[error("image bounds must be positive")]
    EmptyBounds,
}
