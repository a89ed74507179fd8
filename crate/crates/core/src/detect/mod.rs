//! Repeated-object detection by displacement voting.
//!
//! Gradient-magnitude and colour-deviation maps are computed at several blur
//! scales, and their local maxima vote with nearest-neighbour displacements.
//! The two strongest non-collinear votes span the lattice; its phase is the
//! circular mean of the colour deviation folded into one lattice cell, and
//! every lattice site showing object evidence becomes a centroid, refined by
//! a few mean-shift steps on the deviation map.

mod response;
mod votes;

pub use response::{Feature, Peak, PeakMap};
pub use votes::{canonicalize, DisplacementVote};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{CentroidSet, GeometryError, Point2};
use crate::raster::RasterImage;
use response::{color_response, find_peaks, gradient_response, ResponseMap};
use votes::{angle_deg, pair_displacements, reduce, VoteTable};

#[derive(Debug, Error, PartialEq)]
pub enum DetectError {
    #[error("image must be at least 32x32, got {width}x{height}")]
    TooSmall { width: u32, height: u32 },
    #[error("no dominant displacement (top bin has {votes} vote(s), need 4)")]
    NoDominantDisplacement { votes: u32 },
    #[error("no second displacement at least {min_angle} degrees from the first")]
    NoSecondDirection { min_angle: f64 },
    #[error("no lattice site shows an object")]
    NoObjects,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectParams {
    /// Half-width of the window a peak must dominate.
    pub peak_radius: u32,
    /// Side of the square vote bins, in pixels.
    pub bin_size: f64,
    /// Blur half-widths of the response maps.
    pub scales: Vec<u32>,
    /// Peaks vote for every other peak within this fraction of the smaller
    /// image side (on both axes).
    pub vote_radius: f64,
    /// Bins whose overlap-normalised support reaches this fraction of the
    /// best are lattice-vector candidates; the shortest wins.
    pub support_ratio: f64,
    /// Strongest peaks kept per map.
    pub max_peaks: usize,
    /// Smallest angle between the two lattice vectors, in degrees.
    pub min_angle: f64,
    /// A site is an object when its evidence reaches this fraction of the
    /// 90th percentile over all sites.
    pub evidence_ratio: f64,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self {
            peak_radius: 3,
            bin_size: 2.0,
            scales: vec![1, 2, 4],
            vote_radius: 0.5,
            support_ratio: 0.6,
            max_peaks: 2000,
            min_angle: 15.0,
            evidence_ratio: 0.3,
        }
    }
}

/// Everything the detector found, for inspection and rendering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Detection {
    pub centroids: Vec<Point2<f64>>,
    /// Reduced lattice basis.
    pub basis: [(f64, f64); 2],
    /// Lattice phase: a site position in pixels.
    pub origin: (f64, f64),
    pub peak_maps: Vec<PeakMap>,
    /// Bins sorted by count, largest first.
    pub votes: Vec<DisplacementVote>,
    pub width: u32,
    pub height: u32,
}

impl Detection {
    pub fn peak_count(&self) -> usize {
        self.peak_maps.iter().map(|m| m.peaks.len()).sum()
    }

    pub fn centroid_set(&self) -> Result<CentroidSet<f64>, GeometryError> {
        CentroidSet::new(self.centroids.clone(), self.width, self.height)
    }
}

/// Detects object centroids; see [`detect`].
pub fn detect_centroids(
    image: &RasterImage,
    params: &DetectParams,
) -> Result<CentroidSet<f64>, DetectError> {
    Ok(detect(image, params)?.centroid_set()?)
}

pub fn detect(image: &RasterImage, params: &DetectParams) -> Result<Detection, DetectError> {
    let (w, h) = (image.width(), image.height());
    if w < 32 || h < 32 {
        return Err(DetectError::TooSmall {
            width: w,
            height: h,
        });
    }
    if !(params.bin_size > 0.0)
        || params.scales.is_empty()
        || !(params.vote_radius > 0.0 && params.vote_radius < 1.0)
        || !(params.support_ratio > 0.0 && params.support_ratio <= 1.0)
    {
        return Err(DetectError::InvalidParams(
            "bin_size must be positive, scales non-empty, vote_radius and support_ratio in (0, 1)"
                .into(),
        ));
    }

    let jobs: Vec<(u32, Feature)> = params
        .scales
        .iter()
        .flat_map(|&s| [(s, Feature::Gradient), (s, Feature::Color)])
        .collect();
    let peak_maps: Vec<PeakMap> = jobs
        .par_iter()
        .map(|&(scale, feature)| {
            let map = match feature {
                Feature::Gradient => gradient_response(image, scale),
                Feature::Color => color_response(image, scale),
            };
            let (mut peaks, threshold) = find_peaks(&map, params.peak_radius);
            if peaks.len() > params.max_peaks {
                peaks.sort_by(|a, b| {
                    b.strength
                        .total_cmp(&a.strength)
                        .then((a.y, a.x).cmp(&(b.y, b.x)))
                });
                peaks.truncate(params.max_peaks);
                peaks.sort_by_key(|p| (p.y, p.x));
            }
            PeakMap {
                scale,
                feature,
                peaks,
                threshold,
            }
        })
        .collect();

    let radius = params.vote_radius * w.min(h) as f64;
    let mut table = VoteTable::new(params.bin_size);
    for m in &peak_maps {
        for v in pair_displacements(&m.peaks, radius) {
            table.add(v);
        }
    }
    let (v1, v2) = lattice_vectors(&table, w, h, params)?;
    let (u, v) = reduce(v1, v2);
    let lattice = Lattice::new(u, v).ok_or(DetectError::NoSecondDirection {
        min_angle: params.min_angle,
    })?;

    let saliency = color_response(image, 1);
    let mut lattice = lattice;
    let mut origin = lattice.phase(&saliency);
    for _ in 0..4 {
        match lattice.coarsen(origin, &saliency, w, h) {
            Some((l, o)) => (lattice, origin) = (l, o),
            None => break,
        }
    }
    let (u, v) = (lattice.u, lattice.v);
    let radius = 0.3 * lattice.min_spacing();
    let sites = lattice.sites(origin, w, h);
    let evidence: Vec<f64> = sites
        .iter()
        .map(|&p| disk_mean(&saliency, p, radius))
        .collect();
    let mut sorted = evidence.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let reference = sorted
        .get(((sorted.len() as f64 * 0.9) as usize).min(sorted.len().saturating_sub(1)))
        .copied()
        .unwrap_or(0.0);
    if reference <= 0.0 {
        return Err(DetectError::NoObjects);
    }
    let centroids: Vec<Point2<f64>> = sites
        .iter()
        .zip(&evidence)
        .filter(|(_, &e)| e > 0.0 && e >= params.evidence_ratio * reference)
        .map(|(&p, _)| refine(&saliency, p, radius))
        .filter(|p| p.0 >= 0.0 && p.1 >= 0.0 && p.0 < w as f64 && p.1 < h as f64)
        .map(|p| Point2::new(p.0, p.1))
        .collect();
    if centroids.is_empty() {
        return Err(DetectError::NoObjects);
    }
    Ok(Detection {
        centroids,
        basis: [u, v],
        origin,
        peak_maps,
        votes: table.votes(),
        width: w,
        height: h,
    })
}

/// Picks the two shortest well-supported, non-collinear displacements.
/// Support is divided by the image overlap of the displacement, so that
/// every multiple of a lattice vector scores alike.
fn lattice_vectors(
    table: &VoteTable,
    w: u32,
    h: u32,
    params: &DetectParams,
) -> Result<((f64, f64), (f64, f64)), DetectError> {
    let supports = table.supports();
    let top = supports.iter().map(|s| s.0).max().unwrap_or(0);
    if top < 4 {
        return Err(DetectError::NoDominantDisplacement { votes: top });
    }
    let overlap = |v: (f64, f64)| ((w as f64 - v.0.abs()) * (h as f64 - v.1.abs())).max(1.0);
    let scored: Vec<(f64, (f64, f64))> = supports
        .iter()
        .filter(|s| s.0 >= 4)
        .map(|&(c, v)| (c as f64 / overlap(v), v))
        .collect();
    let best = scored.iter().map(|s| s.0).fold(0.0, f64::max);
    let mut cands: Vec<(f64, f64)> = scored
        .iter()
        .filter(|s| s.0 >= params.support_ratio * best)
        .map(|s| s.1)
        .collect();
    cands.sort_by(|a, b| a.0.hypot(a.1).total_cmp(&b.0.hypot(b.1)));
    let v1 = cands[0];
    let v2 = cands
        .iter()
        .find(|v| {
            let a = angle_deg(v1, **v);
            a >= params.min_angle && a <= 180.0 - params.min_angle
        })
        .copied()
        .ok_or(DetectError::NoSecondDirection {
            min_angle: params.min_angle,
        })?;
    Ok((v1, v2))
}

struct Lattice {
    u: (f64, f64),
    v: (f64, f64),
    det: f64,
}

impl Lattice {
    fn new(u: (f64, f64), v: (f64, f64)) -> Option<Self> {
        let det = u.0 * v.1 - u.1 * v.0;
        (det.abs() > 1e-9).then_some(Self { u, v, det })
    }

    fn min_spacing(&self) -> f64 {
        self.u.0.hypot(self.u.1).min(self.v.0.hypot(self.v.1))
    }

    /// Coordinates of `p` in the basis.
    fn coords(&self, p: (f64, f64)) -> (f64, f64) {
        (
            (p.0 * self.v.1 - p.1 * self.v.0) / self.det,
            (self.u.0 * p.1 - self.u.1 * p.0) / self.det,
        )
    }

    fn point(&self, a: f64, b: f64) -> (f64, f64) {
        (a * self.u.0 + b * self.v.0, a * self.u.1 + b * self.v.1)
    }

    /// Circular mean, per basis axis, of the map folded into one cell.
    fn phase(&self, map: &ResponseMap) -> (f64, f64) {
        use std::f64::consts::TAU;
        let mut acc = [0.0f64; 4];
        for y in 0..map.height {
            for x in 0..map.width {
                let s = map.get(x, y) as f64;
                if s == 0.0 {
                    continue;
                }
                let (a, b) = self.coords((x as f64, y as f64));
                acc[0] += s * (TAU * a).cos();
                acc[1] += s * (TAU * a).sin();
                acc[2] += s * (TAU * b).cos();
                acc[3] += s * (TAU * b).sin();
            }
        }
        let a = acc[1].atan2(acc[0]) / TAU;
        let b = acc[3].atan2(acc[2]) / TAU;
        self.point(a, b)
    }

    /// The index-2 sublattice whose two cosets differ most in mean site
    /// evidence, with its origin on the stronger coset, when the weaker one
    /// holds less than half the evidence of the stronger.
    fn coarsen(
        &self,
        origin: (f64, f64),
        map: &ResponseMap,
        w: u32,
        h: u32,
    ) -> Option<(Lattice, (f64, f64))> {
        let radius = 0.3 * self.min_spacing();
        let sites: Vec<((i64, i64), f64)> = self
            .indexed_sites(origin, w, h)
            .into_iter()
            .map(|(k, p)| (k, disk_mean(map, p, radius)))
            .collect();
        let parities: [fn((i64, i64)) -> i64; 3] = [|k| k.0, |k| k.1, |k| k.0 + k.1];
        let mut best: Option<(f64, usize, i64)> = None;
        for (n, parity) in parities.iter().enumerate() {
            let mut acc = [(0.0, 0usize); 2];
            for &(k, e) in &sites {
                let c = parity(k).rem_euclid(2) as usize;
                acc[c].0 += e;
                acc[c].1 += 1;
            }
            if acc.iter().any(|a| a.1 < 2) {
                continue;
            }
            let m = [acc[0].0 / acc[0].1 as f64, acc[1].0 / acc[1].1 as f64];
            let (hi, lo) = if m[0] >= m[1] { (0, 1) } else { (1, 0) };
            if m[hi] <= 0.0 {
                continue;
            }
            let ratio = m[lo] / m[hi];
            if ratio < 0.5 && best.is_none_or(|b| ratio < b.0) {
                best = Some((ratio, n, hi as i64));
            }
        }
        let (_, n, class) = best?;
        let (u, v) = (self.u, self.v);
        let add = |a: (f64, f64), b: (f64, f64)| (a.0 + b.0, a.1 + b.1);
        let (nu, nv, shift) = match n {
            0 => ((2.0 * u.0, 2.0 * u.1), v, u),
            1 => (u, (2.0 * v.0, 2.0 * v.1), v),
            _ => (add(u, v), add(u, (-v.0, -v.1)), u),
        };
        let (nu, nv) = reduce(nu, nv);
        let origin = if class == 1 {
            add(origin, shift)
        } else {
            origin
        };
        Some((Lattice::new(nu, nv)?, origin))
    }

    fn sites(&self, origin: (f64, f64), w: u32, h: u32) -> Vec<(f64, f64)> {
        self.indexed_sites(origin, w, h)
            .into_iter()
            .map(|(_, p)| p)
            .collect()
    }

    fn indexed_sites(&self, origin: (f64, f64), w: u32, h: u32) -> Vec<((i64, i64), (f64, f64))> {
        let corners = [
            (0.0, 0.0),
            (w as f64, 0.0),
            (0.0, h as f64),
            (w as f64, h as f64),
        ];
        let cs: Vec<(f64, f64)> = corners
            .iter()
            .map(|c| self.coords((c.0 - origin.0, c.1 - origin.1)))
            .collect();
        let lo_a = cs.iter().map(|c| c.0).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
        let hi_a = cs
            .iter()
            .map(|c| c.0)
            .fold(f64::NEG_INFINITY, f64::max)
            .ceil() as i64
            + 1;
        let lo_b = cs.iter().map(|c| c.1).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
        let hi_b = cs
            .iter()
            .map(|c| c.1)
            .fold(f64::NEG_INFINITY, f64::max)
            .ceil() as i64
            + 1;
        let mut out = Vec::new();
        for b in lo_b..=hi_b {
            for a in lo_a..=hi_a {
                let d = self.point(a as f64, b as f64);
                let p = (origin.0 + d.0, origin.1 + d.1);
                if p.0 >= 0.0 && p.1 >= 0.0 && p.0 < w as f64 && p.1 < h as f64 {
                    out.push(((a, b), p));
                }
            }
        }
        out
    }
}

fn disk_pixels(map: &ResponseMap, c: (f64, f64), r: f64) -> impl Iterator<Item = (u32, u32)> + '_ {
    let x0 = (c.0 - r).floor().max(0.0) as u32;
    let y0 = (c.1 - r).floor().max(0.0) as u32;
    let x1 = ((c.0 + r).ceil().max(0.0) as u32).min(map.width.saturating_sub(1));
    let y1 = ((c.1 + r).ceil().max(0.0) as u32).min(map.height.saturating_sub(1));
    (y0..=y1)
        .flat_map(move |y| (x0..=x1).map(move |x| (x, y)))
        .filter(move |&(x, y)| (x as f64 - c.0).hypot(y as f64 - c.1) <= r)
}

fn disk_mean(map: &ResponseMap, c: (f64, f64), r: f64) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for (x, y) in disk_pixels(map, c, r) {
        sum += map.get(x, y) as f64;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Mean-shift on the map with a flat disk kernel.
fn refine(map: &ResponseMap, start: (f64, f64), r: f64) -> (f64, f64) {
    let mut c = start;
    for _ in 0..5 {
        let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
        for (x, y) in disk_pixels(map, c, r) {
            let s = map.get(x, y) as f64;
            sx += s * x as f64;
            sy += s * y as f64;
            sw += s;
        }
        if sw == 0.0 {
            break;
        }
        let next = (sx / sw, sy / sw);
        if (next.0 - start.0).hypot(next.1 - start.1) > r {
            break;
        }
        let moved = (next.0 - c.0).hypot(next.1 - c.1);
        c = next;
        if moved < 0.01 {
            break;
        }
    }
    c
}
