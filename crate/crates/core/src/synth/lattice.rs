use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SynthConfig, SynthError};
use crate::dsl::LinearExpr;
use crate::geometry::{CentroidSet, LatticeIndex, Point2};
use crate::scalar::{sq, Scalar};

/// The lattice 5-tuple: `x = b_x + i*d_xi + j*d_xj`, `y = b_y + j*d_yj`.
///
/// Field order is the tuple order used for tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeModel {
    pub b_x: i64,
    pub b_y: i64,
    pub d_xi: i64,
    pub d_xj: i64,
    pub d_yj: i64,
}

impl LatticeModel {
    pub const fn new(b_x: i64, b_y: i64, d_xi: i64, d_xj: i64, d_yj: i64) -> Self {
        Self {
            b_x,
            b_y,
            d_xi,
            d_xj,
            d_yj,
        }
    }

    /// Same point set with the shear in `(-d_xi/2, d_xi/2]`, `b_y` in
    /// `[0, d_yj)` and `b_x` in `[0, d_xi)`.
    ///
    /// Panics if either spacing is not positive.
    pub fn canonical(self) -> Self {
        let (a, h) = (self.d_xi, self.d_yj);
        assert!(a > 0 && h > 0, "lattice spacings must be positive");
        let mut s = self.d_xj.rem_euclid(a);
        if 2 * s > a {
            s -= a;
        }
        let k = self.b_y.div_euclid(h);
        Self {
            b_x: (self.b_x - k * s).rem_euclid(a),
            b_y: self.b_y - k * h,
            d_xi: a,
            d_xj: s,
            d_yj: h,
        }
    }

    /// Spacings of at least 2 and `|d_xj| < d_xi`.
    pub fn is_valid(&self) -> bool {
        self.d_xi >= 2 && self.d_yj >= 2 && self.d_xj.abs() < self.d_xi
    }

    pub fn position(&self, idx: LatticeIndex) -> Point2<i64> {
        Point2::new(
            self.b_x + idx.i * self.d_xi + idx.j * self.d_xj,
            self.b_y + idx.j * self.d_yj,
        )
    }

    pub fn x_expr(&self) -> LinearExpr {
        LinearExpr::new(self.d_xi, self.d_xj, self.b_x)
    }

    pub fn y_expr(&self) -> LinearExpr {
        LinearExpr::new(0, self.d_yj, self.b_y)
    }

    /// Relabels indices so that site `origin` becomes `(0, 0)`.
    pub fn rebased(&self, origin: LatticeIndex) -> Self {
        let p = self.position(origin);
        Self {
            b_x: p.x,
            b_y: p.y,
            ..*self
        }
    }

    /// Inclusive range of `j` with rows inside `[0, height)`.
    fn rows(&self, height: u32) -> (i64, i64) {
        let h = self.d_yj;
        (
            -self.b_y.div_euclid(h),
            (height as i64 - 1 - self.b_y).div_euclid(h),
        )
    }

    /// Inclusive range of `i` with row `j` inside `[0, width)`.
    fn columns(&self, j: i64, width: u32) -> (i64, i64) {
        let a = self.d_xi;
        let x0 = self.b_x + j * self.d_xj;
        (-x0.div_euclid(a), (width as i64 - 1 - x0).div_euclid(a))
    }

    /// Number of lattice points inside a `width x height` image.
    pub fn site_count(&self, width: u32, height: u32) -> u64 {
        let (j0, j1) = self.rows(height);
        (j0..=j1)
            .map(|j| {
                let (i0, i1) = self.columns(j, width);
                (i1 - i0 + 1).max(0) as u64
            })
            .sum()
    }

    /// All lattice points inside the image, ordered by `(i, j)`.
    pub fn sites(&self, width: u32, height: u32) -> Vec<(LatticeIndex, Point2<i64>)> {
        let (j0, j1) = self.rows(height);
        let mut out = Vec::new();
        for j in j0..=j1 {
            let (i0, i1) = self.columns(j, width);
            for i in i0..=i1 {
                let idx = LatticeIndex::new(i, j);
                out.push((idx, self.position(idx)));
            }
        }
        out.sort_by_key(|(idx, _)| *idx);
        out
    }

    /// Nearest in-image lattice point to `p` and its squared distance.
    /// Returns `None` when the image holds no lattice point.
    pub fn nearest_site<T: Scalar>(
        &self,
        p: Point2<T>,
        width: u32,
        height: u32,
    ) -> Option<(LatticeIndex, T)> {
        let (j0, j1) = self.rows(height);
        if j0 > j1 {
            return None;
        }
        let a = self.d_xi;
        let h = self.d_yj;
        let pf = p.to_f64();
        let jc = (((pf.y - self.b_y as f64) / h as f64).round() as i64).clamp(j0, j1);
        let mut best: Option<(LatticeIndex, T)> = None;
        let row = |j: i64, best: &mut Option<(LatticeIndex, T)>| {
            let (i0, i1) = self.columns(j, width);
            if i0 > i1 {
                return;
            }
            let x0 = self.b_x + j * self.d_xj;
            let dy2 = sq(p.y - T::from_i64(self.b_y + j * h));
            let ic = (((pf.x - x0 as f64) / a as f64).round() as i64).clamp(i0, i1);
            for i in (ic - 1).max(i0)..=(ic + 1).min(i1) {
                let d = dy2 + sq(p.x - T::from_i64(x0 + i * a));
                let better = match best {
                    None => true,
                    Some((bi, bd)) => match d.total_cmp_value(bd) {
                        Ordering::Less => true,
                        Ordering::Equal => LatticeIndex::new(i, j) < *bi,
                        Ordering::Greater => false,
                    },
                };
                if better {
                    *best = Some((LatticeIndex::new(i, j), d));
                }
            }
        };
        let (mut down, mut up) = (true, true);
        row(jc, &mut best);
        let mut step = 1i64;
        while down || up {
            for (j, open) in [(jc - step, &mut down), (jc + step, &mut up)] {
                if !*open {
                    continue;
                }
                if j < j0 || j > j1 {
                    *open = false;
                    continue;
                }
                let dy2 = sq(p.y - T::from_i64(self.b_y + j * h));
                if let Some((_, bd)) = best {
                    if dy2 > bd {
                        *open = false;
                        continue;
                    }
                }
                row(j, &mut best);
            }
            step += 1;
        }
        best
    }
}

/// `λ|P| + Σ min_P d²`, aborting once the running total exceeds `bound`.
/// `None` when the lattice has no in-image site or the bound is exceeded.
fn bounded_cost<T: Scalar>(
    points: &[Point2<T>],
    model: &LatticeModel,
    width: u32,
    height: u32,
    lambda: T,
    bound: Option<T>,
) -> Option<T> {
    let count = model.site_count(width, height);
    if count == 0 {
        return None;
    }
    let mut total = lambda * T::from_i64(count as i64);
    for p in points {
        if let Some(b) = bound {
            if total > b {
                return None;
            }
        }
        let (_, d) = model.nearest_site(*p, width, height)?;
        total = total + d;
    }
    match bound {
        Some(b) if total > b => None,
        _ => Some(total),
    }
}

/// Lattice cost of `model` on the centroids: squared distance from every
/// centroid to its nearest in-image lattice point, plus `lambda` per
/// in-image lattice point.
pub fn lattice_cost<T: Scalar>(
    centroids: &CentroidSet<T>,
    model: &LatticeModel,
    lambda: T,
) -> Result<T, SynthError> {
    if model.d_xi <= 0 || model.d_yj <= 0 {
        return Err(SynthError::InvalidModel(format!(
            "spacings must be positive, got d_xi={} d_yj={}",
            model.d_xi, model.d_yj
        )));
    }
    bounded_cost(
        centroids.points(),
        model,
        centroids.width(),
        centroids.height(),
        lambda,
        None,
    )
    .ok_or(SynthError::EmptyLattice)
}

/// Candidate ordering: cost first, then the smaller tuple.
fn better<T: Scalar>(a: &(LatticeModel, T), b: &(LatticeModel, T)) -> bool {
    match a.1.total_cmp_value(&b.1) {
        Ordering::Less => true,
        Ordering::Equal => a.0 < b.0,
        Ordering::Greater => false,
    }
}

fn pick_best<T: Scalar>(
    a: Option<(LatticeModel, T)>,
    b: Option<(LatticeModel, T)>,
) -> Option<(LatticeModel, T)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if better(&y, &x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Finds the lattice minimizing [`lattice_cost`] with both spacings inside
/// the configured bounds. Small problems are enumerated exhaustively; larger
/// ones start from displacement modes and refine locally.
pub fn lattice_search<T: Scalar>(
    centroids: &CentroidSet<T>,
    config: &SynthConfig,
) -> Result<(LatticeModel, T), SynthError> {
    config.validate()?;
    if centroids.len() < 4 {
        return Err(SynthError::InsufficientCentroids {
            found: centroids.len(),
        });
    }
    let lambda = config.lambda_as::<T>()?;
    let mut points = centroids.points().to_vec();
    points.sort_by(|a, b| {
        a.x.total_cmp_value(&b.x)
            .then_with(|| a.y.total_cmp_value(&b.y))
    });
    let search = Search {
        points: &points,
        width: centroids.width(),
        height: centroids.height(),
        lambda,
        lo: config.spacing_min,
        hi: config.spacing_max,
    };
    let best = if search.exhaustive_size() <= config.exhaustive_budget as u128 {
        search.exhaustive()
    } else {
        search.heuristic()
    };
    best.ok_or(SynthError::NoLattice)
}

struct Search<'a, T> {
    points: &'a [Point2<T>],
    width: u32,
    height: u32,
    lambda: T,
    lo: i64,
    hi: i64,
}

impl<T: Scalar> Search<'_, T> {
    fn exhaustive_size(&self) -> u128 {
        let sq_sum: u128 = (self.lo..=self.hi).map(|a| (a as u128) * (a as u128)).sum();
        let sum: u128 = (self.lo..=self.hi).map(|h| h as u128).sum();
        self.points.len() as u128 * sq_sum * sum
    }

    fn cost(&self, m: &LatticeModel, bound: Option<T>) -> Option<T> {
        bounded_cost(self.points, m, self.width, self.height, self.lambda, bound)
    }

    fn in_range(&self, m: &LatticeModel) -> bool {
        (self.lo..=self.hi).contains(&m.d_xi) && (self.lo..=self.hi).contains(&m.d_yj)
    }

    fn exhaustive(&self) -> Option<(LatticeModel, T)> {
        let shapes: Vec<(i64, i64)> = (self.lo..=self.hi)
            .flat_map(|a| (self.lo..=self.hi).map(move |h| (a, h)))
            .collect();
        shapes
            .par_iter()
            .map(|&(a, h)| {
                let mut best: Option<(LatticeModel, T)> = None;
                for s in -((a - 1) / 2)..=a / 2 {
                    for b_x in 0..a {
                        for b_y in 0..h {
                            let m = LatticeModel::new(b_x, b_y, a, s, h);
                            if let Some(c) = self.cost(&m, best.map(|b| b.1)) {
                                best = pick_best(best, Some((m, c)));
                            }
                        }
                    }
                }
                best
            })
            .reduce(|| None, pick_best)
    }

    fn heuristic(&self) -> Option<(LatticeModel, T)> {
        let pts: Vec<Point2<f64>> = self.points.iter().map(|p| p.to_f64()).collect();
        let mut seeds: Vec<LatticeModel> = Vec::new();
        for (a, h, s) in shape_candidates(&pts, self.width, self.height, self.lo, self.hi) {
            for m in fit_origins(&pts, a, h, s) {
                let m = m.canonical();
                if self.in_range(&m) && !seeds.contains(&m) {
                    seeds.push(m);
                }
            }
        }
        let mut scored: Vec<(LatticeModel, T)> = seeds
            .par_iter()
            .filter_map(|m| self.cost(m, None).map(|c| (*m, c)))
            .collect();
        scored.sort_by(|a, b| a.1.total_cmp_value(&b.1).then_with(|| a.0.cmp(&b.0)));
        scored.truncate(4);
        scored
            .into_par_iter()
            .map(|start| Some(self.refine(start)))
            .reduce(|| None, pick_best)
    }

    /// Steepest descent over the ±1 cube, then one ±2 sweep; repeats while
    /// the sweep finds something better.
    fn refine(&self, start: (LatticeModel, T)) -> (LatticeModel, T) {
        let mut best = start;
        let mut seen: HashSet<LatticeModel> = HashSet::new();
        seen.insert(best.0);
        loop {
            loop {
                let next = self.sweep(best, 1, &mut seen);
                if next.0 == best.0 {
                    break;
                }
                best = next;
            }
            let next = self.sweep(best, 2, &mut seen);
            if next.0 == best.0 {
                return best;
            }
            best = next;
        }
    }

    fn sweep(
        &self,
        center: (LatticeModel, T),
        radius: i64,
        seen: &mut HashSet<LatticeModel>,
    ) -> (LatticeModel, T) {
        let c = center.0;
        let r = radius;
        let mut fresh = Vec::new();
        for dx in -r..=r {
            for dy in -r..=r {
                for da in -r..=r {
                    for ds in -r..=r {
                        for dh in -r..=r {
                            let a = c.d_xi + da;
                            let h = c.d_yj + dh;
                            if a < self.lo.max(2)
                                || a > self.hi
                                || h < self.lo.max(2)
                                || h > self.hi
                            {
                                continue;
                            }
                            let m = LatticeModel::new(c.b_x + dx, c.b_y + dy, a, c.d_xj + ds, h)
                                .canonical();
                            if seen.insert(m) {
                                fresh.push(m);
                            }
                        }
                    }
                }
            }
        }
        let bound = center.1;
        let found = fresh
            .par_iter()
            .filter_map(|m| self.cost(m, Some(bound)).map(|cost| (*m, cost)))
            .reduce_with(|a, b| if better(&b, &a) { b } else { a });
        match found {
            Some(f) if better(&f, &center) => f,
            _ => center,
        }
    }
}

/// Mean-shift modes of the nearest-neighbour displacement vectors, most
/// supported first. Each mode is reported once, in the half-plane
/// `dx > 0 || (dx == 0 && dy > 0)`.
pub(crate) fn displacement_modes(points: &[Point2<f64>], k: usize) -> Vec<(Point2<f64>, usize)> {
    let n = points.len();
    if n < 2 {
        return Vec::new();
    }
    let k = k.min(n - 1);
    let pool: Vec<Point2<f64>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut near: Vec<(f64, usize)> = (0..n)
                .filter(|&q| q != p)
                .map(|q| (points[p].dist2(&points[q]), q))
                .collect();
            near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            near.truncate(k);
            near.into_iter()
                .flat_map(move |(_, q)| {
                    let d = Point2::new(points[q].x - points[p].x, points[q].y - points[p].y);
                    [d, Point2::new(-d.x, -d.y)]
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut bins: HashMap<(i64, i64), usize> = HashMap::new();
    for v in &pool {
        *bins
            .entry(((v.x / 2.0).floor() as i64, (v.y / 2.0).floor() as i64))
            .or_default() += 1;
    }
    let mut bins: Vec<((i64, i64), usize)> =
        bins.into_iter().filter(|&((bx, _), _)| bx >= -1).collect();
    bins.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    bins.truncate(32);

    let radius = |v: &Point2<f64>| (0.2 * v.x.hypot(v.y)).max(2.0);
    let mut modes: Vec<(Point2<f64>, usize)> = Vec::new();
    for ((bx, by), _) in bins {
        let mut c = Point2::new(bx as f64 * 2.0 + 1.0, by as f64 * 2.0 + 1.0);
        let mut support = 0;
        for _ in 0..30 {
            let r2 = sq(radius(&c));
            let (mut sx, mut sy) = (0.0, 0.0);
            let mut cnt = 0usize;
            for v in &pool {
                if v.dist2(&c) <= r2 {
                    sx += v.x;
                    sy += v.y;
                    cnt += 1;
                }
            }
            if cnt == 0 {
                break;
            }
            let next = Point2::new(sx / cnt as f64, sy / cnt as f64);
            support = cnt;
            let moved = next.dist2(&c);
            c = next;
            if moved < 1e-6 {
                break;
            }
        }
        if support == 0 || c.x.hypot(c.y) < 1.0 {
            continue;
        }
        if c.x < 0.0 || (c.x == 0.0 && c.y < 0.0) {
            c = Point2::new(-c.x, -c.y);
        }
        if let Some(m) = modes.iter_mut().find(|(m, _)| m.dist2(&c) <= sq(radius(m))) {
            if support > m.1 {
                *m = (c, support);
            }
            continue;
        }
        modes.push((c, support));
    }
    modes.sort_by(|a, b| {
        b.1.cmp(&a.1).then(
            a.0.dist2(&Point2::new(0.0, 0.0))
                .total_cmp(&b.0.dist2(&Point2::new(0.0, 0.0))),
        )
    });
    modes
}

fn angle_between_lines(u: &Point2<f64>, v: &Point2<f64>) -> f64 {
    let cross = (u.x * v.y - u.y * v.x).abs();
    let dot = (u.x * v.x + u.y * v.y).abs();
    cross.atan2(dot).to_degrees()
}

/// `(d_xi, d_yj, d_xj)` estimates from pairs of displacement modes.
fn shape_candidates(
    pts: &[Point2<f64>],
    width: u32,
    height: u32,
    lo: i64,
    hi: i64,
) -> Vec<(f64, f64, f64)> {
    let modes = displacement_modes(pts, 6);
    let top: Vec<Point2<f64>> = modes.iter().take(6).map(|m| m.0).collect();
    let mut out: Vec<(f64, f64, f64)> = Vec::new();
    let push = |c: (f64, f64, f64), out: &mut Vec<(f64, f64, f64)>| {
        let key = (c.0.round(), c.1.round(), c.2.round());
        if c.0 >= 1.5
            && c.1 >= 1.5
            && !out
                .iter()
                .any(|o| (o.0.round(), o.1.round(), o.2.round()) == key)
        {
            out.push(c);
        }
    };
    for (x, u) in top.iter().enumerate() {
        for v in &top[x + 1..] {
            if angle_between_lines(u, v) < 15.0 {
                continue;
            }
            let area = (u.x * v.y - u.y * v.x).abs();
            let combos: Vec<Point2<f64>> = (-4i32..=4)
                .flat_map(|m1| (-4i32..=4).map(move |m2| (m1, m2)))
                .filter(|&(m1, m2)| (m1, m2) != (0, 0))
                .map(|(m1, m2)| {
                    Point2::new(
                        m1 as f64 * u.x + m2 as f64 * v.x,
                        m1 as f64 * u.y + m2 as f64 * v.y,
                    )
                })
                .collect();
            let mut flats: Vec<&Point2<f64>> = combos
                .iter()
                .filter(|w| w.x > 0.0 && w.y.abs() <= 0.15 * w.x)
                .collect();
            flats.sort_by(|a, b| a.x.total_cmp(&b.x));
            for w in flats.into_iter().take(2) {
                let a = w.x;
                let h = area / a;
                let rise = combos
                    .iter()
                    .filter(|c| (c.y - h).abs() <= 0.25 * h)
                    .min_by(|p, q| p.x.abs().total_cmp(&q.x.abs()));
                if let Some(r) = rise {
                    push((a, h, r.x), &mut out);
                }
            }
        }
    }
    if out.is_empty() {
        // collinear objects: a single row, column or diagonal line
        if let Some(u) = top.first() {
            let clamp = |v: u32| (v as i64).clamp(lo, hi) as f64;
            if u.y.abs() <= 0.15 * u.x {
                push((u.x, clamp(height), 0.0), &mut out);
            } else {
                let (dx, dy) = if u.y < 0.0 { (-u.x, -u.y) } else { (u.x, u.y) };
                push((clamp(width), dy, dx), &mut out);
            }
        }
    }
    out
}

/// Least-squares lattices for one shape estimate, grown outward from a few
/// reference centroids.
fn fit_origins(pts: &[Point2<f64>], a: f64, h: f64, s: f64) -> Vec<LatticeModel> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let center = Point2::new(cx, cy);
    let mut refs: Vec<usize> = (0..pts.len()).collect();
    refs.sort_by(|&p, &q| {
        pts[p]
            .dist2(&center)
            .total_cmp(&pts[q].dist2(&center))
            .then(p.cmp(&q))
    });
    refs.truncate(3);
    refs.into_iter()
        .filter_map(|r| fit_from(pts, pts[r], a, h, s))
        .collect()
}

fn fit_from(
    pts: &[Point2<f64>],
    origin: Point2<f64>,
    a: f64,
    h: f64,
    s: f64,
) -> Option<LatticeModel> {
    let (mut bx, mut by, mut a, mut h, mut s) = (origin.x, origin.y, a, h, s);
    let reach = a.max(h);
    for radius in [2.5, 5.0, 10.0, f64::INFINITY] {
        for _ in 0..2 {
            let near: Vec<(Point2<f64>, f64, f64)> = pts
                .iter()
                .filter(|p| p.dist2(&origin) <= sq(radius * reach))
                .map(|p| {
                    let j = ((p.y - by) / h).round();
                    let i = ((p.x - bx - j * s) / a).round();
                    (*p, i, j)
                })
                .collect();
            if let Some((b, d)) = line_fit(near.iter().map(|&(p, _, j)| (j, p.y))) {
                by = b;
                h = d;
            }
            if let Some((b, da, ds)) = plane_fit(near.iter().map(|&(p, i, j)| (i, j, p.x))) {
                bx = b;
                a = da;
                s = ds;
            }
        }
    }
    let (a, h, s) = (a.round() as i64, h.round() as i64, s.round() as i64);
    if a < 1 || h < 1 {
        return None;
    }
    // origin refit with the integer steps
    let (mut sx, mut sy) = (0.0, 0.0);
    for p in pts {
        let j = ((p.y - by) / h as f64).round();
        let i = ((p.x - bx - j * s as f64) / a as f64).round();
        sx += p.x - i * a as f64 - j * s as f64;
        sy += p.y - j * h as f64;
    }
    let n = pts.len() as f64;
    Some(LatticeModel::new(
        (sx / n).round() as i64,
        (sy / n).round() as i64,
        a,
        s,
        h,
    ))
}

/// Fits `v = b + d*t`; `None` when `t` is constant.
fn line_fit(samples: impl Iterator<Item = (f64, f64)>) -> Option<(f64, f64)> {
    let (mut n, mut st, mut sv, mut stt, mut stv) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (t, v) in samples {
        n += 1.0;
        st += t;
        sv += v;
        stt += t * t;
        stv += t * v;
    }
    let det = n * stt - st * st;
    if n < 2.0 || det.abs() < 1e-9 {
        return None;
    }
    let d = (n * stv - st * sv) / det;
    Some(((sv - d * st) / n, d))
}

/// Fits `v = b + a*i + s*j`; `None` when the design is singular.
fn plane_fit(samples: impl Iterator<Item = (f64, f64, f64)>) -> Option<(f64, f64, f64)> {
    let mut m = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    for (i, j, v) in samples {
        let row = [1.0, i, j];
        for (x, rx) in row.iter().enumerate() {
            for (y, ry) in row.iter().enumerate() {
                m[x][y] += rx * ry;
            }
            r[x] += rx * v;
        }
    }
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d.abs() < 1e-9 {
        return None;
    }
    let mut sol = [0.0; 3];
    for (c, out) in sol.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][c] = r[row];
        }
        *out = det(&mc) / d;
    }
    Some((sol[0], sol[1], sol[2]))
}
