use serde::{Deserialize, Serialize};

use crate::raster::RasterImage;

/// Single-channel `f32` map, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMap {
    pub width: u32,
    pub height: u32,
    pub values: Vec<f32>,
}

impl ResponseMap {
    pub fn get(&self, x: u32, y: u32) -> f32 {
        self.values[(y * self.width + x) as usize]
    }

    fn mean_std(&self) -> (f64, f64) {
        let n = self.values.len() as f64;
        let mean = self.values.iter().map(|&v| v as f64).sum::<f64>() / n;
        let var = self
            .values
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / n;
        (mean, var.sqrt())
    }
}

/// One local maximum of a response map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub x: u32,
    pub y: u32,
    pub strength: f32,
}

/// Sparse maxima of one response map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakMap {
    pub scale: u32,
    pub feature: Feature,
    /// Peaks in scan order.
    pub peaks: Vec<Peak>,
    pub threshold: f32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Gradient,
    Color,
}

/// Three passes of a box filter of half-width `r` per axis, clamped at the
/// borders.
pub(crate) fn blur(values: &[f32], w: usize, h: usize, r: usize) -> Vec<f32> {
    if r == 0 {
        return values.to_vec();
    }
    let mut cur = values.to_vec();
    let mut tmp = vec![0f32; cur.len()];
    let norm = 1.0 / (2 * r + 1) as f32;
    for _ in 0..3 {
        for y in 0..h {
            let row = &cur[y * w..(y + 1) * w];
            let at = |x: i64| row[x.clamp(0, w as i64 - 1) as usize];
            let mut acc: f32 = (-(r as i64)..=r as i64).map(at).sum();
            for x in 0..w {
                tmp[y * w + x] = acc * norm;
                acc += at(x as i64 + r as i64 + 1) - at(x as i64 - r as i64);
            }
        }
        for x in 0..w {
            let at = |y: i64| tmp[y.clamp(0, h as i64 - 1) as usize * w + x];
            let mut acc: f32 = (-(r as i64)..=r as i64).map(at).sum();
            for y in 0..h {
                cur[y * w + x] = acc * norm;
                acc += at(y as i64 + r as i64 + 1) - at(y as i64 - r as i64);
            }
        }
    }
    cur
}

fn median(values: &[f32]) -> f32 {
    let mut v = values.to_vec();
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    *m
}

fn channels(image: &RasterImage) -> [Vec<f32>; 3] {
    let mut out: [Vec<f32>; 3] = Default::default();
    for (c, ch) in out.iter_mut().enumerate() {
        *ch = image.pixels().iter().map(|p| p[c] as f32).collect();
    }
    out
}

/// Distance of the blurred colour from the image's median colour.
pub(crate) fn color_response(image: &RasterImage, scale: u32) -> ResponseMap {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let blurred = channels(image).map(|ch| blur(&ch, w, h, scale as usize));
    let med = [
        median(&blurred[0]),
        median(&blurred[1]),
        median(&blurred[2]),
    ];
    let values = (0..w * h)
        .map(|k| {
            (0..3)
                .map(|c| (blurred[c][k] - med[c]).powi(2))
                .sum::<f32>()
                .sqrt()
        })
        .collect();
    ResponseMap {
        width: w as u32,
        height: h as u32,
        values,
    }
}

/// Gradient magnitude of the blurred luminance (central differences).
pub(crate) fn gradient_response(image: &RasterImage, scale: u32) -> ResponseMap {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let luma: Vec<f32> = image
        .pixels()
        .iter()
        .map(|p| 0.299 * p[0] as f32 + 0.587 * p[1] as f32 + 0.114 * p[2] as f32)
        .collect();
    let l = blur(&luma, w, h, scale as usize);
    let at = |x: usize, y: usize| l[y * w + x];
    let mut values = vec![0f32; w * h];
    for y in 0..h {
        for x in 0..w {
            let gx = at((x + 1).min(w - 1), y) - at(x.saturating_sub(1), y);
            let gy = at(x, (y + 1).min(h - 1)) - at(x, y.saturating_sub(1));
            values[y * w + x] = 0.5 * gx.hypot(gy);
        }
    }
    ResponseMap {
        width: w as u32,
        height: h as u32,
        values,
    }
}

/// Local maxima within a square window of half-width `radius` whose value
/// exceeds `mean + std` of the map. Equal values are ordered by scan
/// position, the earlier pixel winning, so each plateau yields one peak.
pub(crate) fn find_peaks(map: &ResponseMap, radius: u32) -> (Vec<Peak>, f32) {
    let (mean, std) = map.mean_std();
    let threshold = (mean + std) as f32;
    if std == 0.0 {
        return (Vec::new(), threshold);
    }
    let (w, h) = (map.width as i64, map.height as i64);
    let r = radius as i64;
    let mut peaks = Vec::new();
    for y in 0..h {
        'px: for x in 0..w {
            let v = map.values[(y * w + x) as usize];
            if v <= threshold {
                continue;
            }
            for qy in (y - r).max(0)..=(y + r).min(h - 1) {
                for qx in (x - r).max(0)..=(x + r).min(w - 1) {
                    if (qx, qy) == (x, y) {
                        continue;
                    }
                    let q = map.values[(qy * w + qx) as usize];
                    let earlier = (qy, qx) < (y, x);
                    if q > v || (earlier && q == v) {
                        continue 'px;
                    }
                }
            }
            peaks.push(Peak {
                x: x as u32,
                y: y as u32,
                strength: v,
            });
        }
    }
    (peaks, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blur_preserves_constants_and_mass_centre() {
        let v = vec![3.0f32; 30];
        assert!(blur(&v, 6, 5, 2).iter().all(|&x| (x - 3.0).abs() < 1e-5));
        let mut spike = vec![0f32; 121];
        spike[60] = 1.0;
        let b = blur(&spike, 11, 11, 1);
        let total: f32 = b.iter().sum();
        assert!((total - 1.0).abs() < 1e-5);
        assert_eq!(
            b.iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0,
            60
        );
    }

    #[test]
    fn plateau_gives_one_peak() {
        let mut values = vec![0f32; 100];
        for (x, y) in [(4, 4), (5, 4), (4, 5), (5, 5)] {
            values[y * 10 + x] = 5.0;
        }
        let map = ResponseMap {
            width: 10,
            height: 10,
            values,
        };
        let (peaks, _) = find_peaks(&map, 2);
        assert_eq!(peaks.len(), 1);
        assert_eq!((peaks[0].x, peaks[0].y), (4, 4));
    }

    #[test]
    fn flat_map_has_no_peaks() {
        let map = ResponseMap {
            width: 8,
            height: 8,
            values: vec![1.0; 64],
        };
        assert!(find_peaks(&map, 1).0.is_empty());
    }

    #[test]
    fn colour_response_is_zero_on_background() {
        let img = RasterImage::from_fn(20, 20, |x, y| {
            if (8..12).contains(&x) && (8..12).contains(&y) {
                [255, 0, 0]
            } else {
                [0, 0, 255]
            }
        });
        let m = color_response(&img, 0);
        assert_eq!(m.get(0, 0), 0.0);
        assert!(m.get(9, 9) > 300.0);
        let g = gradient_response(&img, 0);
        assert_eq!(g.get(9, 9), 0.0);
        assert!(g.get(8, 9) > 0.0);
    }
}
