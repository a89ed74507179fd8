use serde::{Deserialize, Serialize};

use super::{
    attribute_search, condition_search, lattice_search, LatticeModel, PatchDistanceFn, SynthConfig,
    SynthError,
};
use crate::dsl::{AttributeExpr, RegularityProgram};
use crate::geometry::{CentroidSet, LatticeIndex};
use crate::raster::RasterImage;
use crate::scalar::Scalar;

/// Output of [`synthesize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthReport {
    pub program: RegularityProgram,
    /// The lattice in the program's index frame.
    pub model: LatticeModel,
    /// Lattice cost of the searched lattice.
    pub lattice_cost: f64,
    /// Attribute cost, when an image was given.
    pub attribute_cost: Option<f64>,
    /// `(centroid index, program index)` for each matched centroid.
    pub matches: Vec<(usize, LatticeIndex)>,
    pub dropped: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Runs lattice, condition and attribute search. Without an image the
/// attribute is the constant 0.
pub fn synthesize<T: Scalar>(
    centroids: &CentroidSet<T>,
    image: Option<&RasterImage>,
    config: &SynthConfig,
) -> Result<SynthReport, SynthError> {
    if let Some(img) = image {
        if (img.width(), img.height()) != (centroids.width(), centroids.height()) {
            return Err(SynthError::InvalidInput(format!(
                "image is {}x{} but centroids are in a {}x{} frame",
                img.width(),
                img.height(),
                centroids.width(),
                centroids.height()
            )));
        }
    }
    let (model, cost) = lattice_search(centroids, config)?;
    let fit = condition_search(centroids, &model)?;
    let (attribute, attribute_cost) = match image {
        Some(img) => {
            let dist = match config.patch_window {
                Some(w) => PatchDistanceFn::new(w),
                None => PatchDistanceFn::from_spacing(&centroids.to_f64().points().to_vec()),
            };
            let found = attribute_search(centroids, img, &fit.matches, config, &dist);
            (found.expr, Some(found.cost))
        }
        None => (AttributeExpr::Constant, None),
    };
    let program = RegularityProgram::new(
        fit.outer,
        fit.inner,
        fit.conditions.clone(),
        fit.model.x_expr(),
        fit.model.y_expr(),
        attribute,
    )?;
    Ok(SynthReport {
        program,
        model: fit.model,
        lattice_cost: cost.to_f64_lossy(),
        attribute_cost,
        matches: fit.matches,
        dropped: fit.dropped,
        warnings: fit.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{execute, Bounds, LinearExpr, LoopRange};
    use crate::geometry::Point2;

    #[test]
    fn grid_without_image() {
        let pts: Vec<Point2<i64>> = (0..4)
            .flat_map(|i| (0..4).map(move |j| Point2::new(6 + 12 * i, 6 + 12 * j)))
            .collect();
        let c = CentroidSet::new(pts, 48, 48).unwrap();
        let r = synthesize(&c, None, &SynthConfig::default()).unwrap();
        assert_eq!(r.program.outer(), LoopRange::new(0, 4));
        assert_eq!(r.program.inner(), LoopRange::new(0, 4));
        assert_eq!(r.program.attribute(), AttributeExpr::Constant);
        assert_eq!(r.program.x(), LinearExpr::new(12, 0, 6));
        assert_eq!(r.lattice_cost, 80.0);
    }

    #[test]
    fn triangle_gets_one_condition() {
        let pts: Vec<Point2<i64>> = (0..5)
            .flat_map(|i| (0..5 - i).map(move |j| Point2::new(5 + 10 * i + 5 * j, 5 + 9 * j)))
            .collect();
        let c = CentroidSet::new(pts.clone(), 52, 46).unwrap();
        let r = synthesize(&c, None, &SynthConfig::default()).unwrap();
        assert_eq!(r.program.conditions().len(), 1);
        let mut got: Vec<_> = execute(&r.program, Bounds::new(52, 46))
            .into_iter()
            .map(|d| (d.position.x, d.position.y))
            .collect();
        let mut want: Vec<_> = pts.iter().map(|p| (p.x, p.y)).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn checkerboard_image() {
        let cell = 10u32;
        let img = RasterImage::from_fn(60, 60, |x, y| {
            let (i, j) = (x / cell, y / cell);
            let (dx, dy) = (x % cell, y % cell);
            let disc = (dx as i32 - 5).pow(2) + (dy as i32 - 5).pow(2) <= 9;
            match (disc, (i + j) % 2) {
                (false, _) => [20, 20, 20],
                (true, 0) => [230, 40, 40],
                (true, _) => [40, 40, 230],
            }
        });
        let pts: Vec<Point2<i64>> = (0..6)
            .flat_map(|i| (0..6).map(move |j| Point2::new(5 + 10 * i, 5 + 10 * j)))
            .collect();
        let c = CentroidSet::new(pts, 60, 60).unwrap();
        let r = synthesize(&c, Some(&img), &SynthConfig::default()).unwrap();
        assert_eq!(
            r.program.attribute(),
            AttributeExpr::Modulo {
                expr: LinearExpr::new(1, 1, 0),
                modulus: 2
            }
        );
    }

    #[test]
    fn image_size_checked() {
        let pts: Vec<Point2<i64>> = (0..4).map(|k| Point2::new(k * 5, 0)).collect();
        let c = CentroidSet::new(pts, 20, 20).unwrap();
        let img = RasterImage::filled(10, 10, [0; 3]);
        assert!(matches!(
            synthesize(&c, Some(&img), &SynthConfig::default()),
            Err(SynthError::InvalidInput(_))
        ));
    }
}
