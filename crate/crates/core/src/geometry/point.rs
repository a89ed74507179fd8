use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::scalar::{sq, Scalar};

/// A position in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn dist2(&self, other: &Self) -> T {
        sq(self.x - other.x) + sq(self.y - other.y)
    }

    pub fn to_f64(self) -> Point2<f64> {
        Point2::new(self.x.to_f64_lossy(), self.y.to_f64_lossy())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite_value() && self.y.is_finite_value()
    }
}

impl Point2<f64> {
    /// Nearest integer pixel.
    pub fn round(self) -> Point2<i64> {
        Point2::new(self.x.round() as i64, self.y.round() as i64)
    }
}

impl Eq for Point2<i64> {}

impl std::hash::Hash for Point2<i64> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl Point2<i64> {
    pub fn cast<T: Scalar>(self) -> Point2<T> {
        Point2::new(T::from_i64(self.x), T::from_i64(self.y))
    }
}

/// Integer loop coordinates `(i, j)` of a lattice site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeIndex {
    pub i: i64,
    pub j: i64,
}

impl LatticeIndex {
    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }
}

impl From<(i64, i64)> for LatticeIndex {
    fn from((i, j): (i64, i64)) -> Self {
        Self { i, j }
    }
}

/// Detected object centroids inside a `width x height` image.
///
/// Construction rejects points outside `[0, width) x [0, height)` and pairs
/// closer than one pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSet<T = f64> {
    points: Vec<Point2<T>>,
    descriptors: Option<Vec<Vec<f32>>>,
    width: u32,
    height: u32,
}

impl<T: Scalar> CentroidSet<T> {
    pub fn new(points: Vec<Point2<T>>, width: u32, height: u32) -> Result<Self, GeometryError> {
        if width == 0 || height == 0 {
            return Err(GeometryError::EmptyBounds);
        }
        let w = T::from_i64(width as i64);
        let h = T::from_i64(height as i64);
        for (index, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(GeometryError::NonFinite(index));
            }
            if p.x < T::zero() || p.y < T::zero() || p.x >= w || p.y >= h {
                return Err(GeometryError::OutOfBounds {
                    index,
                    x: p.x.to_f64_lossy(),
                    y: p.y.to_f64_lossy(),
                    width,
                    height,
                });
            }
        }
        if let Some((a, b)) = find_close_pair(&points) {
            return Err(GeometryError::Duplicate(a, b));
        }
        Ok(Self {
            points,
            descriptors: None,
            width,
            height,
        })
    }

    pub fn with_descriptors(mut self, descriptors: Vec<Vec<f32>>) -> Result<Self, GeometryError> {
        if descriptors.len() != self.points.len() {
            return Err(GeometryError::DescriptorCount {
                expected: self.points.len(),
                got: descriptors.len(),
            });
        }
        self.descriptors = Some(descriptors);
        Ok(self)
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn descriptors(&self) -> Option<&[Vec<f32>]> {
        self.descriptors.as_deref()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same centroids as `f64` coordinates.
    pub fn to_f64(&self) -> CentroidSet<f64> {
        CentroidSet {
            points: self.points.iter().map(|p| p.to_f64()).collect(),
            descriptors: self.descriptors.clone(),
            width: self.width,
            height: self.height,
        }
    }
}

/// Returns the first pair (in sweep order) closer than one pixel.
fn find_close_pair<T: Scalar>(points: &[Point2<T>]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp_value(&points[b].x)
            .then_with(|| points[a].y.total_cmp_value(&points[b].y))
    });
    let one = T::one();
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if points[b].x - points[a].x >= one {
                break;
            }
            if points[a].dist2(&points[b]) < one {
                return Some((a.min(b), a.max(b)));
            }
        }
    }
    None
}
