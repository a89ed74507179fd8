use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::response::Peak;

/// Accumulated nearest-neighbour displacements falling in one bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementVote {
    /// Mean canonical displacement of the votes in the bin.
    pub vector: (f64, f64),
    pub count: u32,
}

/// Maps `v` and `-v` to the same representative: `dx > 0`, or `dx == 0`
/// and `dy > 0`.
pub fn canonicalize(dx: f64, dy: f64) -> (f64, f64) {
    if dx > 0.0 || (dx == 0.0 && dy > 0.0) {
        (dx, dy)
    } else {
        (-dx, -dy)
    }
}

/// Canonical displacements between every pair of peaks closer than
/// `radius` on both axes.
pub(crate) fn pair_displacements(peaks: &[Peak], radius: f64) -> Vec<(f64, f64)> {
    let mut sorted: Vec<&Peak> = peaks.iter().collect();
    sorted.sort_by_key(|p| (p.x, p.y));
    let mut out = Vec::new();
    for (a, p) in sorted.iter().enumerate() {
        for q in &sorted[a + 1..] {
            let dx = q.x as f64 - p.x as f64;
            if dx > radius {
                break;
            }
            let dy = q.y as f64 - p.y as f64;
            if dy.abs() <= radius {
                out.push(canonicalize(dx, dy));
            }
        }
    }
    out
}

/// Votes binned on a square grid of side `bin`.
#[derive(Debug, Clone)]
pub(crate) struct VoteTable {
    bin: f64,
    bins: BTreeMap<(i64, i64), (u32, f64, f64)>,
}

impl VoteTable {
    pub fn new(bin: f64) -> Self {
        Self {
            bin,
            bins: BTreeMap::new(),
        }
    }

    fn key(&self, v: (f64, f64)) -> (i64, i64) {
        (
            (v.0 / self.bin).round() as i64,
            (v.1 / self.bin).round() as i64,
        )
    }

    pub fn add(&mut self, v: (f64, f64)) {
        let v = canonicalize(v.0, v.1);
        let e = self.bins.entry(self.key(v)).or_insert((0, 0.0, 0.0));
        e.0 += 1;
        e.1 += v.0;
        e.2 += v.1;
    }

    pub fn votes(&self) -> Vec<DisplacementVote> {
        let mut v: Vec<DisplacementVote> = self
            .bins
            .values()
            .map(|&(count, sx, sy)| DisplacementVote {
                vector: (sx / count as f64, sy / count as f64),
                count,
            })
            .collect();
        v.sort_by_key(|b| std::cmp::Reverse(b.count));
        v
    }

    /// Votes in the 3x3 bin neighbourhood of `key`, including bins whose
    /// negation falls there. The vector is the mean of the neighbourhood
    /// bins lying within one bin width of the mean of `key` itself.
    fn support(&self, key: (i64, i64)) -> (u32, (f64, f64)) {
        let Some(&(own, ox, oy)) = self.bins.get(&key) else {
            return (0, (0.0, 0.0));
        };
        let centre = (ox / own as f64, oy / own as f64);
        let mut count = 0;
        let (mut n, mut sx, mut sy) = (0, 0.0, 0.0);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let k = (key.0 + dx, key.1 + dy);
                let neg = (-k.0, -k.1);
                let found = [(k, 1.0), (neg, -1.0)];
                for (kk, sign) in found {
                    if kk == neg && neg == k {
                        continue;
                    }
                    if let Some(&(c, x, y)) = self.bins.get(&kk) {
                        count += c;
                        let m = (sign * x / c as f64, sign * y / c as f64);
                        if (m.0 - centre.0).hypot(m.1 - centre.1) <= self.bin {
                            n += c;
                            sx += sign * x;
                            sy += sign * y;
                        }
                    }
                }
            }
        }
        (count, (sx / n as f64, sy / n as f64))
    }

    /// Neighbourhood support and vector of every bin holding at least as
    /// many votes as each bin in its 3x3 neighbourhood (ties to the lower
    /// key), in key order.
    pub fn supports(&self) -> Vec<(u32, (f64, f64))> {
        let own = |k: (i64, i64)| self.bins.get(&k).map_or(0, |b| b.0);
        self.bins
            .iter()
            .filter(|&(&k, &(c, _, _))| {
                (-1..=1).all(|dx| {
                    (-1..=1).all(|dy| {
                        let n = (k.0 + dx, k.1 + dy);
                        n == k
                            || [n, (-n.0, -n.1)]
                                .into_iter()
                                .filter(|&m| m != k)
                                .all(|m| own(m) < c || (own(m) == c && m > k))
                    })
                })
            })
            .map(|(&k, _)| self.support(k))
            .collect()
    }

    /// Bins ranked by neighbourhood support, shorter vectors first on ties.
    #[cfg(test)]
    pub fn ranked(&self) -> Vec<(u32, (f64, f64))> {
        let mut v: Vec<(u32, (f64, f64), (i64, i64))> = self
            .bins
            .keys()
            .map(|&k| {
                let (c, m) = self.support(k);
                (c, m, k)
            })
            .collect();
        v.sort_by(|a, b| {
            b.0.cmp(&a.0)
                .then((a.2 .0.pow(2) + a.2 .1.pow(2)).cmp(&(b.2 .0.pow(2) + b.2 .1.pow(2))))
                .then(a.2.cmp(&b.2))
        });
        v.into_iter().map(|(c, m, _)| (c, m)).collect()
    }
}

/// Lagrange-Gauss reduction: the shortest basis of the lattice spanned by
/// `u` and `v`.
pub(crate) fn reduce(mut u: (f64, f64), mut v: (f64, f64)) -> ((f64, f64), (f64, f64)) {
    let n2 = |a: (f64, f64)| a.0 * a.0 + a.1 * a.1;
    if n2(u) > n2(v) {
        std::mem::swap(&mut u, &mut v);
    }
    for _ in 0..64 {
        let m = ((u.0 * v.0 + u.1 * v.1) / n2(u)).round();
        if m == 0.0 {
            break;
        }
        v = (v.0 - m * u.0, v.1 - m * u.1);
        if n2(v) >= n2(u) {
            break;
        }
        std::mem::swap(&mut u, &mut v);
    }
    (u, v)
}

pub(crate) fn angle_deg(u: (f64, f64), v: (f64, f64)) -> f64 {
    let cross = u.0 * v.1 - u.1 * v.0;
    let dot = u.0 * v.0 + u.1 * v.1;
    cross.abs().atan2(dot).to_degrees()
}
