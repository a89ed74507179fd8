use serde::{Deserialize, Serialize};

use super::LatticeIndex;

/// Integer half-plane `a*i + b*j + c >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HalfPlane {
    pub fn eval(&self, p: LatticeIndex) -> i64 {
        self.a * p.i + self.b * p.j + self.c
    }

    pub fn contains(&self, p: LatticeIndex) -> bool {
        self.eval(p) >= 0
    }

    pub fn is_axis_aligned(&self) -> bool {
        self.a == 0 || self.b == 0
    }

    /// Supporting line through `p` and `q` with the left side (counter-clockwise
    /// interior) as the feasible side, reduced so `gcd(a, b, c) = 1`.
    fn through(p: LatticeIndex, q: LatticeIndex) -> Self {
        let a = -(q.j - p.j);
        let b = q.i - p.i;
        let c = -(a * p.i + b * p.j);
        let g = gcd(gcd(a.abs(), b.abs()), c.abs()).max(1);
        Self {
            a: a / g,
            b: b / g,
            c: c / g,
        }
    }

    fn flipped(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
            c: -self.c,
        }
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullShape {
    Point,
    Segment,
    Polygon,
}

/// Convex hull of lattice indices.
///
/// `vertices` are strictly convex and counter-clockwise starting from the
/// lexicographically smallest index. For polygons `edges[k]` supports the
/// edge from `vertices[k]` to `vertices[k + 1]`. A segment hull carries the
/// two opposite half-planes of its line; a point hull carries none. In the
/// degenerate cases the bounding box supplies the remaining constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexHull {
    pub vertices: Vec<LatticeIndex>,
    pub edges: Vec<HalfPlane>,
    pub shape: HullShape,
}

impl ConvexHull {
    pub fn is_degenerate(&self) -> bool {
        self.shape != HullShape::Polygon
    }

    /// Inclusive bounding box `(min, max)` of the vertices.
    pub fn bounding_box(&self) -> (LatticeIndex, LatticeIndex) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.i = lo.i.min(v.i);
            lo.j = lo.j.min(v.j);
            hi.i = hi.i.max(v.i);
            hi.j = hi.j.max(v.j);
        }
        (lo, hi)
    }

    pub fn contains(&self, p: LatticeIndex) -> bool {
        let (lo, hi) = self.bounding_box();
        p.i >= lo.i
            && p.i <= hi.i
            && p.j >= lo.j
            && p.j <= hi.j
            && self.edges.iter().all(|e| e.contains(p))
    }
}

fn cross(o: LatticeIndex, a: LatticeIndex, b: LatticeIndex) -> i64 {
    (a.i - o.i) * (b.j - o.j) - (a.j - o.j) * (b.i - o.i)
}

/// Convex hull by monotone chain; collinear boundary points are dropped.
///
/// # Panics
/// Panics on an empty input.
pub fn convex_hull(points: &[LatticeIndex]) -> ConvexHull {
    assert!(!points.is_empty(), "convex hull of an empty set");
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    if pts.len() == 1 {
        return ConvexHull {
            vertices: pts,
            edges: Vec::new(),
            shape: HullShape::Point,
        };
    }

    let mut lower: Vec<LatticeIndex> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticeIndex> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut vertices = lower;
    vertices.extend(upper);

    if vertices.len() == 2 {
        let line = HalfPlane::through(vertices[0], vertices[1]);
        return ConvexHull {
            vertices,
            edges: vec![line, line.flipped()],
            shape: HullShape::Segment,
        };
    }

    let edges = (0..vertices.len())
        .map(|k| HalfPlane::through(vertices[k], vertices[(k + 1) % vertices.len()]))
        .collect();
    ConvexHull {
        vertices,
        edges,
        shape: HullShape::Polygon,
    }
}
