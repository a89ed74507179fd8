//! Scalar abstraction shared by the geometric and lattice code.
//!
//! Coordinates and costs are generic so the same routines run on exact
//! integers (`i64`, used by oracle tests and integer centroid files) and on
//! floating point (`f64`, used for detected sub-pixel centroids).

use std::fmt::{Debug, Display};

use num_traits::{Num, NumCast, Signed, ToPrimitive};

/// Numeric type usable as a coordinate or cost.
pub trait Scalar:
    Num + Signed + NumCast + ToPrimitive + Copy + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self {
        <Self as NumCast>::from(v).expect("integer out of scalar range")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(self) -> bool {
        self.to_f64_lossy().is_finite()
    }

    /// Total order used for deterministic minimum selection. NaN sorts last.
    fn total_cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other).unwrap_or_else(|| {
            let a = self.to_f64_lossy();
            let b = other.to_f64_lossy();
            a.total_cmp(&b)
        })
    }
}

impl Scalar for i32 {
    const EXACT: bool = true;
}
impl Scalar for i64 {
    const EXACT: bool = true;
}
impl Scalar for f32 {
    const EXACT: bool = false;
}
impl Scalar for f64 {
    const EXACT: bool = false;
}

/// Squared value helper.
#[inline]
pub fn sq<T: Scalar>(v: T) -> T {
    v * v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        assert_eq!(i64::from_i64(-7), -7);
        assert_eq!(f32::from_i64(3), 3.0);
        const { assert!(i64::EXACT) };
        const { assert!(!f64::EXACT) };
        assert_eq!(sq(-3i64), 9);
    }

    #[test]
    fn nan_sorts_last() {
        use std::cmp::Ordering;
        assert_eq!(f64::NAN.total_cmp_value(&1.0), Ordering::Greater);
        assert_eq!(1.0f64.total_cmp_value(&2.0), Ordering::Less);
    }
}
