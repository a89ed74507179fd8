use std::collections::HashMap;

use rayon::prelude::*;

use super::SynthConfig;
use crate::dsl::{AttributeExpr, LinearExpr};
use crate::geometry::{CentroidSet, LatticeIndex, Point2};
use crate::raster::RasterImage;
use crate::scalar::Scalar;

/// Mean absolute per-channel difference of two square patches, scaled to
/// `[0, 1]`. Only offsets valid in both patches count; patches with no such
/// offset are at distance 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchDistanceFn {
    /// Half-size: patches are `(2*window + 1)` pixels wide.
    pub window: u32,
}

impl PatchDistanceFn {
    pub fn new(window: u32) -> Self {
        Self { window }
    }

    /// Window of half the median nearest-neighbour spacing (at least 1).
    pub fn from_spacing(points: &[Point2<f64>]) -> Self {
        if points.len() < 2 {
            return Self::new(1);
        }
        let mut nn: Vec<f64> = points
            .par_iter()
            .enumerate()
            .map(|(k, p)| {
                points
                    .iter()
                    .enumerate()
                    .filter(|&(q, _)| q != k)
                    .map(|(_, q)| p.dist2(q))
                    .fold(f64::INFINITY, f64::min)
                    .sqrt()
            })
            .collect();
        nn.sort_by(f64::total_cmp);
        let median = nn[nn.len() / 2];
        Self::new(((median / 2.0).round() as u32).max(1))
    }

    pub fn distance(&self, image: &RasterImage, p: Point2<i64>, q: Point2<i64>) -> f64 {
        if p == q {
            return 0.0;
        }
        let w = self.window as i64;
        let mut sum = 0u64;
        let mut count = 0u64;
        for dy in -w..=w {
            for dx in -w..=w {
                let (Some(a), Some(b)) =
                    (image.get(p.x + dx, p.y + dy), image.get(q.x + dx, q.y + dy))
                else {
                    continue;
                };
                for c in 0..3 {
                    sum += (a[c] as i32 - b[c] as i32).unsigned_abs() as u64;
                }
                count += 1;
            }
        }
        if count == 0 {
            1.0
        } else {
            sum as f64 / (count as f64 * 3.0 * 255.0)
        }
    }

    /// Symmetric matrix of distances between all patch centers.
    pub fn matrix(&self, image: &RasterImage, centers: &[Point2<i64>]) -> Vec<Vec<f64>> {
        let n = centers.len();
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|p| {
                (p + 1..n)
                    .map(|q| self.distance(image, centers[p], centers[q]))
                    .collect()
            })
            .collect();
        let mut m = vec![vec![0.0; n]; n];
        for (p, row) in upper.iter().enumerate() {
            for (k, &d) in row.iter().enumerate() {
                let q = p + 1 + k;
                m[p][q] = d;
                m[q][p] = d;
            }
        }
        m
    }
}

/// Result of the attribute search.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeFit {
    pub expr: AttributeExpr,
    pub cost: f64,
    pub groups: usize,
}

/// `Σ_{p<q} ±d(p, q) + μ·groups`: `+` for pairs in the same group, `-` for
/// pairs in different groups.
pub fn attribute_cost(
    expr: &AttributeExpr,
    indices: &[LatticeIndex],
    dist: &[Vec<f64>],
    mu: f64,
) -> f64 {
    let labels: Vec<i64> = indices.iter().map(|&i| expr.eval(i)).collect();
    partition_cost(&labels, dist, mu).0
}

fn partition_cost<L: PartialEq + Ord + Copy>(
    labels: &[L],
    dist: &[Vec<f64>],
    mu: f64,
) -> (f64, usize) {
    let mut total = 0.0;
    for (p, row) in dist.iter().enumerate().take(labels.len()) {
        for (q, d) in row.iter().enumerate().take(labels.len()).skip(p + 1) {
            if labels[p] == labels[q] {
                total += d;
            } else {
                total -= d;
            }
        }
    }
    let mut distinct = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    (total + mu * distinct.len() as f64, distinct.len())
}

/// Template order: variant, total absolute coefficient, moduli, then the
/// coefficients themselves with positive before negative.
type TemplateKey = (u8, i64, i64, Vec<(i64, bool)>, Vec<i64>);

fn template_key(expr: &AttributeExpr) -> TemplateKey {
    let (rank, exprs, moduli): (u8, Vec<LinearExpr>, Vec<i64>) = match *expr {
        AttributeExpr::Constant => (0, vec![], vec![]),
        AttributeExpr::Quotient { expr, divisor } => (1, vec![expr], vec![divisor]),
        AttributeExpr::IsZero { expr } => (2, vec![expr], vec![]),
        AttributeExpr::IsZeroBoth { first, second } => (3, vec![first, second], vec![]),
        AttributeExpr::Modulo { expr, modulus } => (4, vec![expr], vec![modulus]),
        AttributeExpr::ModuloBoth {
            first,
            first_modulus,
            second,
            second_modulus,
        } => (5, vec![first, second], vec![first_modulus, second_modulus]),
    };
    let coefs: Vec<i64> = exprs
        .iter()
        .flat_map(|e| [e.coef_i, e.coef_j, e.constant])
        .collect();
    (
        rank,
        coefs.iter().map(|c| c.abs()).sum(),
        moduli.iter().sum(),
        coefs.iter().map(|&c| (c.abs(), c < 0)).collect(),
        moduli,
    )
}

/// Relabels groups by order of first appearance.
fn canonical_partition<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Vec<u32> {
    let mut seen: HashMap<L, u32> = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = seen.len() as u32;
            *seen.entry(*l).or_insert(next)
        })
        .collect()
}

struct Pool {
    best: HashMap<Vec<u32>, (TemplateKey, AttributeExpr)>,
}

impl Pool {
    fn offer<L: Eq + std::hash::Hash + Copy>(&mut self, labels: &[L], expr: AttributeExpr) {
        let key = template_key(&expr);
        let part = canonical_partition(labels);
        match self.best.get_mut(&part) {
            Some(slot) if slot.0 <= key => {}
            Some(slot) => *slot = (key, expr),
            None => {
                self.best.insert(part, (key, expr));
            }
        }
    }
}

fn linear_exprs(r: i64) -> Vec<LinearExpr> {
    let mut out = Vec::new();
    for ci in -r..=r {
        for cj in -r..=r {
            for c in -r..=r {
                out.push(LinearExpr::new(ci, cj, c));
            }
        }
    }
    out
}

/// Binary component templates keyed by their exact 0/1 labeling, keeping the
/// smallest template for each labeling.
fn components(
    indices: &[LatticeIndex],
    templates: impl Iterator<Item = AttributeExpr>,
) -> Vec<(Vec<u8>, AttributeExpr)> {
    let mut by_bits: HashMap<Vec<u8>, (TemplateKey, AttributeExpr)> = HashMap::new();
    for t in templates {
        let bits: Vec<u8> = indices.iter().map(|&i| t.eval(i) as u8).collect();
        let key = template_key(&t);
        match by_bits.get_mut(&bits) {
            Some(slot) if slot.0 <= key => {}
            Some(slot) => *slot = (key, t),
            None => {
                by_bits.insert(bits, (key, t));
            }
        }
    }
    let mut out: Vec<(Vec<u8>, TemplateKey, AttributeExpr)> =
        by_bits.into_iter().map(|(b, (k, t))| (b, k, t)).collect();
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out.into_iter().map(|(b, _, t)| (b, t)).collect()
}

/// Attribute search over a precomputed patch-distance matrix.
///
/// Enumerates every template with coefficients in `±coeff_range`, moduli
/// and divisors in `modulus_range`, and at most `max_groups` groups, and
/// returns the one with the lowest [`attribute_cost`]; ties go to fewer
/// groups, then to the simpler template.
pub fn attribute_search_with_distances(
    indices: &[LatticeIndex],
    dist: &[Vec<f64>],
    config: &SynthConfig,
) -> AttributeFit {
    let mu = config.mu;
    if indices.is_empty() {
        return AttributeFit {
            expr: AttributeExpr::Constant,
            cost: 0.0,
            groups: 0,
        };
    }
    let i0 = indices.iter().map(|p| p.i).min().unwrap_or(0);
    let i1 = indices.iter().map(|p| p.i).max().unwrap_or(0);
    let j0 = indices.iter().map(|p| p.j).min().unwrap_or(0);
    let j1 = indices.iter().map(|p| p.j).max().unwrap_or(0);
    let exprs = linear_exprs(config.coeff_range);
    let (mlo, mhi) = config.modulus_range;

    let mut pool = Pool {
        best: HashMap::new(),
    };
    pool.offer(&vec![0i64; indices.len()], AttributeExpr::Constant);
    for &e in &exprs {
        if e.min_over_box(i0, i1, j0, j1) < 0 {
            continue;
        }
        for divisor in mlo..=mhi {
            let t = AttributeExpr::Quotient { expr: e, divisor };
            let labels: Vec<i64> = indices.iter().map(|&i| t.eval(i)).collect();
            let mut groups = labels.clone();
            groups.sort_unstable();
            groups.dedup();
            if groups.len() <= config.max_groups {
                pool.offer(&labels, t);
            }
        }
    }
    let zeros = components(
        indices,
        exprs.iter().map(|&expr| AttributeExpr::IsZero { expr }),
    );
    let mods = components(
        indices,
        exprs.iter().flat_map(|&expr| {
            (mlo..=mhi).map(move |modulus| AttributeExpr::Modulo { expr, modulus })
        }),
    );
    if config.max_groups >= 2 {
        for (bits, t) in zeros.iter().chain(&mods) {
            pool.offer(bits, *t);
        }
        for list in [&zeros, &mods] {
            for (a, ta) in list.iter() {
                for (b, tb) in list.iter() {
                    if a == b {
                        continue;
                    }
                    let both: Vec<u8> = a.iter().zip(b).map(|(x, y)| x & y).collect();
                    pool.offer(&both, conjunction(ta, tb));
                }
            }
        }
    }

    let candidates: Vec<(Vec<u32>, TemplateKey, AttributeExpr)> =
        pool.best.into_iter().map(|(p, (k, t))| (p, k, t)).collect();
    let best = candidates
        .par_iter()
        .map(|(part, key, expr)| {
            let (cost, groups) = partition_cost(part, dist, mu);
            (cost, groups, key, expr)
        })
        .min_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.cmp(&b.1))
                .then_with(|| a.2.cmp(b.2))
        })
        .expect("constant template always present");
    AttributeFit {
        expr: *best.3,
        cost: best.0,
        groups: best.1,
    }
}

fn conjunction(a: &AttributeExpr, b: &AttributeExpr) -> AttributeExpr {
    match (*a, *b) {
        (AttributeExpr::IsZero { expr: first }, AttributeExpr::IsZero { expr: second }) => {
            AttributeExpr::IsZeroBoth { first, second }
        }
        (
            AttributeExpr::Modulo {
                expr: first,
                modulus: first_modulus,
            },
            AttributeExpr::Modulo {
                expr: second,
                modulus: second_modulus,
            },
        ) => AttributeExpr::ModuloBoth {
            first,
            first_modulus,
            second,
            second_modulus,
        },
        _ => unreachable!("conjunctions pair templates of one kind"),
    }
}

/// Attribute search on image patches centered at the matched centroids.
/// `matches` pairs a centroid index with its lattice index.
pub fn attribute_search<T: Scalar>(
    centroids: &CentroidSet<T>,
    image: &RasterImage,
    matches: &[(usize, LatticeIndex)],
    config: &SynthConfig,
    dist: &PatchDistanceFn,
) -> AttributeFit {
    let centers: Vec<Point2<i64>> = matches
        .iter()
        .map(|&(k, _)| centroids.points()[k].to_f64().round())
        .collect();
    let indices: Vec<LatticeIndex> = matches.iter().map(|m| m.1).collect();
    let d = dist.matrix(image, &centers);
    attribute_search_with_distances(&indices, &d, config)
}
