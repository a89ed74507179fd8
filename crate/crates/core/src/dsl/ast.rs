use serde::{Deserialize, Serialize};

use super::DslError;
use crate::geometry::{LatticeIndex, Point2};

/// `coef_i * i + coef_j * j + constant`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct LinearExpr {
    pub coef_i: i64,
    pub coef_j: i64,
    pub constant: i64,
}

impl LinearExpr {
    pub const fn new(coef_i: i64, coef_j: i64, constant: i64) -> Self {
        Self {
            coef_i,
            coef_j,
            constant,
        }
    }

    pub const fn constant(c: i64) -> Self {
        Self::new(0, 0, c)
    }

    pub fn eval(&self, idx: LatticeIndex) -> i64 {
        self.coef_i * idx.i + self.coef_j * idx.j + self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coef_i == 0 && self.coef_j == 0
    }

    /// Minimum over the inclusive box `[i0, i1] x [j0, j1]`.
    pub(crate) fn min_over_box(&self, i0: i64, i1: i64, j0: i64, j1: i64) -> i64 {
        let ci = (self.coef_i * i0).min(self.coef_i * i1);
        let cj = (self.coef_j * j0).min(self.coef_j * j1);
        ci + cj + self.constant
    }
}

/// Per-object group label as a function of the loop indices.
///
/// The binary forms evaluate to `1` when their test holds and `0` otherwise;
/// modulo follows Python semantics (non-negative remainder).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttributeExpr {
    /// Every object in group 0.
    Constant,
    /// `expr // divisor` (floor division).
    Quotient { expr: LinearExpr, divisor: i64 },
    /// `1 If (expr == 0) else 0`
    IsZero { expr: LinearExpr },
    /// `1 If (first == 0 and second == 0) else 0`
    IsZeroBoth {
        first: LinearExpr,
        second: LinearExpr,
    },
    /// `1 If (expr % modulus == 0) else 0`
    Modulo { expr: LinearExpr, modulus: i64 },
    /// `1 If (first % first_modulus == 0 and second % second_modulus == 0) else 0`
    ModuloBoth {
        first: LinearExpr,
        first_modulus: i64,
        second: LinearExpr,
        second_modulus: i64,
    },
}

impl AttributeExpr {
    pub fn eval(&self, idx: LatticeIndex) -> i64 {
        let flag = |b: bool| i64::from(b);
        match *self {
            AttributeExpr::Constant => 0,
            AttributeExpr::Quotient { expr, divisor } => expr.eval(idx).div_euclid(divisor),
            AttributeExpr::IsZero { expr } => flag(expr.eval(idx) == 0),
            AttributeExpr::IsZeroBoth { first, second } => {
                flag(first.eval(idx) == 0 && second.eval(idx) == 0)
            }
            AttributeExpr::Modulo { expr, modulus } => {
                flag(expr.eval(idx).rem_euclid(modulus) == 0)
            }
            AttributeExpr::ModuloBoth {
                first,
                first_modulus,
                second,
                second_modulus,
            } => flag(
                first.eval(idx).rem_euclid(first_modulus) == 0
                    && second.eval(idx).rem_euclid(second_modulus) == 0,
            ),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), DslError> {
        let check = |m: i64, what: &str| {
            if m < 2 {
                Err(DslError::Invalid(format!(
                    "{what} must be at least 2, got {m}"
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            AttributeExpr::Quotient { divisor, .. } => check(divisor, "divisor"),
            AttributeExpr::Modulo { modulus, .. } => check(modulus, "modulus"),
            AttributeExpr::ModuloBoth {
                first_modulus,
                second_modulus,
                ..
            } => {
                check(first_modulus, "modulus")?;
                check(second_modulus, "modulus")
            }
            _ => Ok(()),
        }
    }
}

/// Half-open loop range `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LoopRange {
    pub lo: i64,
    pub hi: i64,
}

impl LoopRange {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo).max(0) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, v: i64) -> bool {
        v >= self.lo && v < self.hi
    }
}

/// Two nested loops, a conjunction of `expr >= 0` conditions and a draw.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProgramRepr", into = "ProgramRepr")]
pub struct RegularityProgram {
    outer: LoopRange,
    inner: LoopRange,
    conditions: Vec<LinearExpr>,
    x: LinearExpr,
    y: LinearExpr,
    attribute: AttributeExpr,
}

impl RegularityProgram {
    pub fn new(
        outer: LoopRange,
        inner: LoopRange,
        conditions: Vec<LinearExpr>,
        x: LinearExpr,
        y: LinearExpr,
        attribute: AttributeExpr,
    ) -> Result<Self, DslError> {
        if outer.is_empty() || inner.is_empty() {
            return Err(DslError::Invalid("empty loop range".into()));
        }
        if y.coef_i != 0 {
            return Err(DslError::Invalid("i appears in y expression".into()));
        }
        attribute.validate()?;
        if let AttributeExpr::Quotient { expr, .. } = attribute {
            if expr.min_over_box(outer.lo, outer.hi - 1, inner.lo, inner.hi - 1) < 0 {
                return Err(DslError::Invalid(
                    "quotient attribute is negative inside the loop ranges".into(),
                ));
            }
        }
        Ok(Self {
            outer,
            inner,
            conditions,
            x,
            y,
            attribute,
        })
    }

    pub fn outer(&self) -> LoopRange {
        self.outer
    }

    pub fn inner(&self) -> LoopRange {
        self.inner
    }

    pub fn conditions(&self) -> &[LinearExpr] {
        &self.conditions
    }

    pub fn x(&self) -> LinearExpr {
        self.x
    }

    pub fn y(&self) -> LinearExpr {
        self.y
    }

    pub fn attribute(&self) -> AttributeExpr {
        self.attribute
    }

    pub fn with_attribute(&self, attribute: AttributeExpr) -> Result<Self, DslError> {
        Self::new(
            self.outer,
            self.inner,
            self.conditions.clone(),
            self.x,
            self.y,
            attribute,
        )
    }

    /// Whether `(i, j)` passes the loop ranges and every condition.
    pub fn admits(&self, idx: LatticeIndex) -> bool {
        self.outer.contains(idx.i)
            && self.inner.contains(idx.j)
            && self.conditions.iter().all(|c| c.eval(idx) >= 0)
    }

    /// Unclipped draw position of a site.
    pub fn position(&self, idx: LatticeIndex) -> Point2<i64> {
        Point2::new(self.x.eval(idx), self.y.eval(idx))
    }
}

#[derive(Serialize, Deserialize)]
struct ProgramRepr {
    outer_range: [i64; 2],
    inner_range: [i64; 2],
    conditions: Vec<LinearExpr>,
    x: LinearExpr,
    y: LinearExpr,
    attribute: AttributeExpr,
}

impl TryFrom<ProgramRepr> for RegularityProgram {
    type Error = DslError;

    fn try_from(r: ProgramRepr) -> Result<Self, Self::Error> {
        RegularityProgram::new(
            LoopRange::new(r.outer_range[0], r.outer_range[1]),
            LoopRange::new(r.inner_range[0], r.inner_range[1]),
            r.conditions,
            r.x,
            r.y,
            r.attribute,
        )
    }
}

impl From<RegularityProgram> for ProgramRepr {
    fn from(p: RegularityProgram) -> Self {
        ProgramRepr {
            outer_range: [p.outer.lo, p.outer.hi],
            inner_range: [p.inner.lo, p.inner.hi],
            conditions: p.conditions,
            x: p.x,
            y: p.y,
            attribute: p.attribute,
        }
    }
}

/// One object placed by a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DrawCommand {
    pub position: Point2<i64>,
    pub attribute: u32,
    pub index: LatticeIndex,
}
