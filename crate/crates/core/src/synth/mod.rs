//! Program synthesis from centroids in three stages: lattice search,
//! condition (boundary) search and attribute search.
//!
//! ```
//! use regprog::geometry::{CentroidSet, Point2};
//! use regprog::synth::{synthesize, SynthConfig};
//!
//! let pts: Vec<Point2<i64>> = (0..4)
//!     .flat_map(|i| (0..4).map(move |j| Point2::new(5 + 10 * i, 5 + 10 * j)))
//!     .collect();
//! let centroids = CentroidSet::new(pts, 40, 40).unwrap();
//! let report = synthesize(&centroids, None, &SynthConfig::default()).unwrap();
//! assert_eq!(report.program.outer().hi, 4);
//! ```

mod attributes;
mod conditions;
mod lattice;
mod pipeline;

pub use attributes::{
    attribute_cost, attribute_search, attribute_search_with_distances, AttributeFit,
    PatchDistanceFn,
};
pub use conditions::{condition_search, BoundaryFit};
pub use lattice::{lattice_cost, lattice_search, LatticeModel};
pub use pipeline::{synthesize, SynthReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::DslError;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("insufficient centroids: need at least 4, found {found}")]
    InsufficientCentroids { found: usize },
    #[error("no lattice found")]
    NoLattice,
    #[error("lattice has no site inside the image")]
    EmptyLattice,
    #[error("no centroid lies near the lattice")]
    NoInliers,
    #[error("invalid lattice model: {0}")]
    InvalidModel(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

/// Search parameters. Defaults: `lambda` 5, `mu` 10, spacings 4..=128 px,
/// at most 8 attribute groups, template coefficients in `[-3, 3]`, moduli
/// and divisors in `2..=5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    /// Cost per reconstructed lattice point.
    pub lambda: f64,
    /// Cost per attribute group.
    pub mu: f64,
    pub spacing_min: i64,
    pub spacing_max: i64,
    pub max_groups: usize,
    pub coeff_range: i64,
    pub modulus_range: (i64, i64),
    /// Largest `n * Σa² * Σh` for which the lattice search enumerates every
    /// tuple instead of refining voted candidates.
    pub exhaustive_budget: u64,
    /// Patch half-size for attribute distances; `None` picks half the median
    /// nearest-neighbour spacing.
    pub patch_window: Option<u32>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            lambda: 5.0,
            mu: 10.0,
            spacing_min: 4,
            spacing_max: 128,
            max_groups: 8,
            coeff_range: 3,
            modulus_range: (2, 5),
            exhaustive_budget: 30_000_000,
            patch_window: None,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |m: String| Err(SynthError::InvalidConfig(m));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return fail(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return fail(format!("mu must be positive, got {}", self.mu));
        }
        if self.spacing_min < 2 || self.spacing_max < self.spacing_min {
            return fail(format!(
                "spacing bounds must satisfy 2 <= min <= max, got {}..={}",
                self.spacing_min, self.spacing_max
            ));
        }
        if self.max_groups == 0 || self.coeff_range < 0 {
            return fail("max_groups must be positive and coeff_range non-negative".into());
        }
        let (lo, hi) = self.modulus_range;
        if lo < 2 || hi < lo {
            return fail(format!(
                "modulus range must satisfy 2 <= lo <= hi, got {lo}..={hi}"
            ));
        }
        Ok(())
    }

    /// `lambda` in the centroid scalar type; exact types need an integer.
    pub(crate) fn lambda_as<T: Scalar>(&self) -> Result<T, SynthError> {
        if T::EXACT && self.lambda.fract() != 0.0 {
            return Err(SynthError::InvalidConfig(format!(
                "lambda {} is not an integer; use floating-point centroids",
                self.lambda
            )));
        }
        <T as num_traits::NumCast>::from(self.lambda).ok_or_else(|| {
            SynthError::InvalidConfig(format!("lambda {} out of range", self.lambda))
        })
    }
}
