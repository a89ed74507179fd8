use std::collections::{HashMap, HashSet};

use super::{LatticeModel, SynthError};
use crate::dsl::{LinearExpr, LoopRange};
use crate::geometry::{assign_costs, convex_hull, CentroidSet, ConvexHull, LatticeIndex};
use crate::scalar::Scalar;

/// Boundary of the matched lattice sites, in a frame where the smallest
/// matched `i` and `j` are both 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFit {
    /// The searched lattice relabeled to the rebased frame.
    pub model: LatticeModel,
    pub outer: LoopRange,
    pub inner: LoopRange,
    /// Hull edges that are not loop bounds, each meaning `expr >= 0`.
    pub conditions: Vec<LinearExpr>,
    pub hull: ConvexHull,
    /// `(centroid index, lattice index)` for every matched centroid.
    pub matches: Vec<(usize, LatticeIndex)>,
    /// Centroids too far from the lattice, or left over by the assignment.
    pub dropped: Vec<usize>,
    /// All matched sites lie on one line (or are a single site).
    pub degenerate: bool,
    pub warnings: Vec<String>,
}

/// Matches centroids to lattice sites, takes the convex hull of the matched
/// indices and splits its edges into loop ranges and conditions.
///
/// Centroids farther than half the smaller lattice spacing from every site
/// are dropped with a warning.
pub fn condition_search<T: Scalar>(
    centroids: &CentroidSet<T>,
    model: &LatticeModel,
) -> Result<BoundaryFit, SynthError> {
    if model.d_xi <= 0 || model.d_yj <= 0 {
        return Err(SynthError::InvalidModel(format!(
            "spacings must be positive, got d_xi={} d_yj={}",
            model.d_xi, model.d_yj
        )));
    }
    let (w, h) = (centroids.width(), centroids.height());
    let points = centroids.points();
    let limit = 0.5 * model.d_xi.min(model.d_yj) as f64;
    let mut warnings = Vec::new();
    let mut dropped = Vec::new();
    let mut nearest: Vec<(usize, LatticeIndex)> = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let (idx, d) = model
            .nearest_site(*p, w, h)
            .ok_or(SynthError::EmptyLattice)?;
        if d.to_f64_lossy() > limit * limit {
            dropped.push(k);
        } else {
            nearest.push((k, idx));
        }
    }
    if !dropped.is_empty() {
        warnings.push(format!(
            "dropped {} centroid(s) farther than {limit} px from the lattice",
            dropped.len()
        ));
    }
    if nearest.is_empty() {
        return Err(SynthError::NoInliers);
    }

    let matches = resolve_collisions(points, model, w, h, nearest, &mut dropped, &mut warnings);
    dropped.sort_unstable();
    if matches.is_empty() {
        return Err(SynthError::NoInliers);
    }

    let i0 = matches.iter().map(|m| m.1.i).min().unwrap_or(0);
    let j0 = matches.iter().map(|m| m.1.j).min().unwrap_or(0);
    let origin = LatticeIndex::new(i0, j0);
    let matches: Vec<(usize, LatticeIndex)> = matches
        .into_iter()
        .map(|(k, idx)| (k, LatticeIndex::new(idx.i - i0, idx.j - j0)))
        .collect();
    let indices: Vec<LatticeIndex> = matches.iter().map(|m| m.1).collect();
    let hull = convex_hull(&indices);
    let (lo, hi) = hull.bounding_box();
    let conditions: Vec<LinearExpr> = hull
        .edges
        .iter()
        .filter(|e| !e.is_axis_aligned())
        .map(|e| LinearExpr::new(e.a, e.b, e.c))
        .collect();
    let degenerate = hull.is_degenerate();
    if degenerate {
        warnings.push("matched sites are collinear; boundary is a single line".into());
    }
    Ok(BoundaryFit {
        model: model.rebased(origin),
        outer: LoopRange::new(lo.i, hi.i + 1),
        inner: LoopRange::new(lo.j, hi.j + 1),
        conditions,
        hull,
        matches,
        dropped,
        degenerate,
        warnings,
    })
}

/// Turns the nearest-site map into a one-to-one matching. Centroids sharing
/// a site, together with their neighbours, are reassigned by minimum-cost
/// assignment over the 3x3 index neighbourhoods of their nearest sites.
fn resolve_collisions<T: Scalar>(
    points: &[crate::geometry::Point2<T>],
    model: &LatticeModel,
    w: u32,
    h: u32,
    nearest: Vec<(usize, LatticeIndex)>,
    dropped: &mut Vec<usize>,
    warnings: &mut Vec<String>,
) -> Vec<(usize, LatticeIndex)> {
    let mut owners: HashMap<LatticeIndex, Vec<usize>> = HashMap::new();
    for (slot, (_, idx)) in nearest.iter().enumerate() {
        owners.entry(*idx).or_default().push(slot);
    }
    let crowded: HashSet<LatticeIndex> = owners
        .iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(k, _)| *k)
        .collect();
    if crowded.is_empty() {
        return nearest;
    }
    let near_crowd = |idx: &LatticeIndex| {
        (-1..=1).any(|di| {
            (-1..=1).any(|dj| crowded.contains(&LatticeIndex::new(idx.i + di, idx.j + dj)))
        })
    };
    let (mut open, mut fixed): (Vec<usize>, Vec<usize>) =
        (0..nearest.len()).partition(|&s| near_crowd(&nearest[s].1));
    open.sort_unstable();
    fixed.sort_unstable();
    let taken: HashSet<LatticeIndex> = fixed.iter().map(|&s| nearest[s].1).collect();
    let inside = |idx: &LatticeIndex| {
        let p = model.position(*idx);
        p.x >= 0 && p.y >= 0 && p.x < w as i64 && p.y < h as i64
    };
    let mut columns: Vec<LatticeIndex> = Vec::new();
    let mut seen = HashSet::new();
    for &s in &open {
        let c = nearest[s].1;
        for di in -1..=1 {
            for dj in -1..=1 {
                let idx = LatticeIndex::new(c.i + di, c.j + dj);
                if inside(&idx) && !taken.contains(&idx) && seen.insert(idx) {
                    columns.push(idx);
                }
            }
        }
    }
    columns.sort_unstable();
    let assigned = assign_costs(open.len(), columns.len(), |r, c| {
        let site = model.position(columns[c]).cast::<T>();
        points[nearest[open[r]].0].dist2(&site)
    });
    let mut out: Vec<(usize, LatticeIndex)> = fixed.iter().map(|&s| nearest[s]).collect();
    let mut lost = 0;
    for (r, col) in assigned.into_iter().enumerate() {
        let k = nearest[open[r]].0;
        match col {
            Some(c) => out.push((k, columns[c])),
            None => {
                dropped.push(k);
                lost += 1;
            }
        }
    }
    if lost > 0 {
        warnings.push(format!("{lost} centroid(s) left without a lattice site"));
    }
    out.sort_unstable();
    out
}
