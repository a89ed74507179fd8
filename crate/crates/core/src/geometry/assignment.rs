//! Exact minimum-cost bipartite assignment (shortest augmenting paths with
//! row/column potentials, O(n^2 m)).

use super::{GeometryError, Point2};
use crate::scalar::Scalar;

/// A one-to-one matching between two point lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment<T> {
    /// `(left index, right index)` pairs sorted by left index.
    pub pairs: Vec<(usize, usize)>,
    /// Total squared Euclidean distance of the matching.
    pub cost: T,
}

/// Matches `min(|left|, |right|)` pairs minimizing total squared distance.
pub fn min_cost_assignment<T: Scalar>(
    left: &[Point2<T>],
    right: &[Point2<T>],
) -> Result<Assignment<T>, GeometryError> {
    if left.is_empty() || right.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    let matched = assign_costs(left.len(), right.len(), |a, b| left[a].dist2(&right[b]));
    let mut cost = T::zero();
    let mut pairs = Vec::with_capacity(matched.len());
    for (a, b) in matched.into_iter().enumerate() {
        if let Some(b) = b {
            cost = cost + left[a].dist2(&right[b]);
            pairs.push((a, b));
        }
    }
    Ok(Assignment { pairs, cost })
}

/// Solves the rectangular assignment problem for an arbitrary cost
/// function. Returns, for each row, the matched column (`None` for rows left
/// unmatched when there are more rows than columns).
pub fn assign_costs<T, F>(rows: usize, cols: usize, cost: F) -> Vec<Option<usize>>
where
    T: Scalar,
    F: Fn(usize, usize) -> T,
{
    if rows == 0 || cols == 0 {
        return vec![None; rows];
    }
    if rows <= cols {
        hungarian(rows, cols, &cost)
    } else {
        let by_col = hungarian(cols, rows, &|c, r| cost(r, c));
        let mut by_row = vec![None; rows];
        for (c, r) in by_col.into_iter().enumerate() {
            if let Some(r) = r {
                by_row[r] = Some(c);
            }
        }
        by_row
    }
}

// Requires n <= m. Arrays are 1-based with slot 0 as the virtual column.
fn hungarian<T, F>(n: usize, m: usize, cost: &F) -> Vec<Option<usize>>
where
    T: Scalar,
    F: Fn(usize, usize) -> T,
{
    let zero = T::zero();
    let mut u = vec![zero; n + 1];
    let mut v = vec![zero; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<T>> = vec![None; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if minv[j].is_none_or(|mv| cur < mv) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].expect("set above");
                if delta.is_none_or(|d| mj < d) {
                    delta = Some(mj);
                    j1 = j;
                }
            }
            let delta = delta.expect("at least one free column while n <= m");
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else if let Some(mv) = minv[j] {
                    minv[j] = Some(mv - delta);
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut result = vec![None; n];
    for j in 1..=m {
        if owner[j] != 0 {
            result[owner[j] - 1] = Some(j - 1);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(costs: &[Vec<i64>]) -> i64 {
        // rows <= cols; enumerate injective maps recursively
        fn go(row: usize, costs: &[Vec<i64>], used: &mut Vec<bool>) -> i64 {
            if row == costs.len() {
                return 0;
            }
            let mut best = i64::MAX;
            for c in 0..costs[row].len() {
                if !used[c] {
                    used[c] = true;
                    best = best.min(costs[row][c] + go(row + 1, costs, used));
                    used[c] = false;
                }
            }
            best
        }
        go(0, costs, &mut vec![false; costs[0].len()])
    }

    #[test]
    fn single_pair() {
        let a = min_cost_assignment(&[Point2::new(0i64, 0)], &[Point2::new(1, 1)]).unwrap();
        assert_eq!(a.pairs, vec![(0, 0)]);
        assert_eq!(a.cost, 2);
    }

    #[test]
    fn swapped_pair() {
        let left = [Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)];
        let right = [Point2::new(10.0, 0.0), Point2::new(0.0, 0.0)];
        let a = min_cost_assignment(&left, &right).unwrap();
        assert_eq!(a.pairs, vec![(0, 1), (1, 0)]);
        assert_eq!(a.cost, 0.0);
    }

    #[test]
    fn empty_input() {
        let e = min_cost_assignment::<f64>(&[], &[Point2::new(1.0, 1.0)]).unwrap_err();
        assert_eq!(e.to_string(), "empty point set");
    }

    #[test]
    fn jittered_permutation_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let left: Vec<Point2<f64>> = (0..5)
                .map(|_| Point2::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
                .collect();
            let mut perm: Vec<usize> = (0..5).collect();
            for k in (1..5).rev() {
                perm.swap(k, rng.gen_range(0..=k));
            }
            let right: Vec<Point2<f64>> = (0..5)
                .map(|k| {
                    let p = left[perm.iter().position(|&q| q == k).unwrap()];
                    Point2::new(
                        p.x + rng.gen_range(-1.0..1.0),
                        p.y + rng.gen_range(-1.0..1.0),
                    )
                })
                .collect();
            // brute force over all 5! permutations
            let mut best = (f64::INFINITY, vec![]);
            let mut idx: Vec<usize> = (0..5).collect();
            permute(&mut idx, 0, &mut |p| {
                let c: f64 = (0..5).map(|k| left[k].dist2(&right[p[k]])).sum();
                if c < best.0 {
                    best = (c, p.to_vec());
                }
            });
            let a = min_cost_assignment(&left, &right).unwrap();
            let got: Vec<usize> = a.pairs.iter().map(|&(_, r)| r).collect();
            assert_eq!(got, best.1);
            assert!((a.cost - best.0).abs() < 1e-9);
        }
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn rectangular_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(rows..7);
            let costs: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..50)).collect())
                .collect();
            let m = assign_costs(rows, cols, |r, c| costs[r][c]);
            let total: i64 = m
                .iter()
                .enumerate()
                .map(|(r, c)| costs[r][c.unwrap()])
                .sum();
            assert_eq!(total, brute_force(&costs));
            // transposed problem leaves extra rows unmatched
            let t = assign_costs(cols, rows, |r, c| costs[c][r]);
            assert_eq!(t.iter().filter(|c| c.is_some()).count(), rows);
            let total_t: i64 = t
                .iter()
                .enumerate()
                .filter_map(|(r, c)| c.map(|c| costs[c][r]))
                .sum();
            assert_eq!(total_t, total);
        }
    }
}
