use rayon::prelude::*;

use super::{CentroidSet, Point2};
use crate::scalar::{sq, Scalar};

/// Per-pixel index of the nearest centroid, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    pub width: u32,
    pub height: u32,
    pub labels: Vec<u32>,
}

impl LabelMap {
    pub fn get(&self, x: u32, y: u32) -> u32 {
        self.labels[(y * self.width + x) as usize]
    }

    /// Pixel count per label.
    pub fn cell_sizes(&self, n: usize) -> Vec<usize> {
        let mut sizes = vec![0; n];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

/// Labels every pixel of the centroid set's image with its nearest centroid.
/// Ties go to the lowest index.
///
/// # Panics
/// Panics if the set is empty.
pub fn voronoi_partition<T: Scalar>(centroids: &CentroidSet<T>) -> LabelMap {
    nearest_labels(centroids.points(), centroids.width(), centroids.height())
}

/// Nearest-site labelling for arbitrary sites (which may lie outside the
/// image).
pub fn nearest_labels<T: Scalar>(sites: &[Point2<T>], width: u32, height: u32) -> LabelMap {
    assert!(
        !sites.is_empty(),
        "nearest-site labelling needs at least one site"
    );
    let grid = BucketGrid::new(sites, width, height);
    let labels: Vec<u32> = (0..height)
        .into_par_iter()
        .flat_map_iter(|y| {
            let grid = &grid;
            (0..width).map(move |x| grid.nearest(sites, x, y))
        })
        .collect();
    LabelMap {
        width,
        height,
        labels,
    }
}

struct BucketGrid {
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<u32>>,
}

impl BucketGrid {
    fn new<T: Scalar>(sites: &[Point2<T>], width: u32, height: u32) -> Self {
        let area = (width as f64) * (height as f64);
        let cell = (area / sites.len() as f64).sqrt().max(1.0);
        let cols = ((width as f64 / cell).ceil() as usize).max(1);
        let rows = ((height as f64 / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); cols * rows];
        for (k, s) in sites.iter().enumerate() {
            let (c, r) = Self::bucket_of(cell, cols, rows, s.x.to_f64_lossy(), s.y.to_f64_lossy());
            buckets[r * cols + c].push(k as u32);
        }
        Self {
            cell,
            cols,
            rows,
            buckets,
        }
    }

    fn bucket_of(cell: f64, cols: usize, rows: usize, x: f64, y: f64) -> (usize, usize) {
        let c = (x / cell).floor().clamp(0.0, (cols - 1) as f64) as usize;
        let r = (y / cell).floor().clamp(0.0, (rows - 1) as f64) as usize;
        (c, r)
    }

    fn nearest<T: Scalar>(&self, sites: &[Point2<T>], x: u32, y: u32) -> u32 {
        let (pc, pr) = Self::bucket_of(self.cell, self.cols, self.rows, x as f64, y as f64);
        let px = T::from_i64(x as i64);
        let py = T::from_i64(y as i64);
        let mut best: Option<(T, u32)> = None;
        let max_ring = self.cols.max(self.rows);
        for ring in 0..=max_ring {
            let r = ring as isize;
            let (pc, pr) = (pc as isize, pr as isize);
            for br in (pr - r).max(0)..=(pr + r).min(self.rows as isize - 1) {
                for bc in (pc - r).max(0)..=(pc + r).min(self.cols as isize - 1) {
                    if (br - pr).abs() != r && (bc - pc).abs() != r {
                        continue;
                    }
                    for &k in &self.buckets[br as usize * self.cols + bc as usize] {
                        let s = &sites[k as usize];
                        let d = sq(s.x - px) + sq(s.y - py);
                        let better = match best {
                            None => true,
                            Some((bd, bk)) => d < bd || (d == bd && k < bk),
                        };
                        if better {
                            best = Some((d, k));
                        }
                    }
                }
            }
            if let Some((bd, _)) = best {
                // sites beyond this ring are at least ring * cell away
                let bound = ring as f64 * self.cell;
                if bd.to_f64_lossy() < bound * bound * (1.0 - 1e-12) {
                    break;
                }
            }
        }
        best.expect("non-empty site list").1
    }
}
