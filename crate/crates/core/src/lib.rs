//! Induction of regularity programs from repeated objects in images, and
//! program-guided inpainting, extrapolation and regularity editing.
//!
//! The pipeline is: [`detect`] centroids of repeated objects, [`synth`]esize a
//! [`dsl::RegularityProgram`] (lattice, boundary conditions, attribute
//! expression) describing them, then [`manip`]ulate the image with
//! aggregation stacks built from the program's draws.
//!
//! Geometry and lattice fitting are generic over [`Scalar`]; the aliases
//! below name the common instantiations.

pub mod detect;
pub mod dsl;
pub mod geometry;
pub mod manip;
pub mod raster;
pub mod scalar;
pub mod synth;

pub use scalar::Scalar;

/// Sub-pixel position.
pub type Point = geometry::Point2<f64>;
/// Integer pixel position.
pub type PixelPoint = geometry::Point2<i64>;
/// Detected (sub-pixel) centroids.
pub type Centroids = geometry::CentroidSet<f64>;
/// Integer centroids, for exact cost evaluation.
pub type ExactCentroids = geometry::CentroidSet<i64>;
