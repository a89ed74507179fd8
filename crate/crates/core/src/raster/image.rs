use super::RasterError;

pub type Rgb = [u8; 3];

/// Per-pixel boolean grid, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: u32, height: u32, value: bool) -> Self {
        Self {
            width,
            height,
            bits: vec![value; (width * height) as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[(y * self.width + x) as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        self.bits[(y * self.width + x) as usize] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter_set(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| (k as u32 % w, k as u32 / w))
    }
}

/// 8-bit RGB image with a validity mask (`true` = known pixel, `false` =
/// hole). Hole pixels store 0.
#[derive(Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
    valid: Vec<bool>,
}

impl std::fmt::Debug for RasterImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use std::hash::{Hash, Hasher};
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        self.pixels.hash(&mut hasher);
        self.valid.hash(&mut hasher);
        f.debug_struct("RasterImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("holes", &self.hole_count())
            .field("digest", &format_args!("{:016x}", hasher.finish()))
            .finish()
    }
}

impl RasterImage {
    pub fn filled(width: u32, height: u32, color: Rgb) -> Self {
        let n = (width * height) as usize;
        Self {
            width,
            height,
            pixels: vec![color; n],
            valid: vec![true; n],
        }
    }

    /// Image with every pixel a hole.
    pub fn empty(width: u32, height: u32) -> Self {
        let n = (width * height) as usize;
        Self {
            width,
            height,
            pixels: vec![[0; 3]; n],
            valid: vec![false; n],
        }
    }

    pub fn from_fn(width: u32, height: u32, f: impl Fn(u32, u32) -> Rgb) -> Self {
        let mut pixels = Vec::with_capacity((width * height) as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        let valid = vec![true; pixels.len()];
        Self {
            width,
            height,
            pixels,
            valid,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        (y * self.width + x) as usize
    }

    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64
    }

    /// Stored value regardless of validity.
    pub fn raw(&self, x: u32, y: u32) -> Rgb {
        self.pixels[self.offset(x, y)]
    }

    /// Value of a known in-bounds pixel.
    pub fn get(&self, x: i64, y: i64) -> Option<Rgb> {
        if !self.in_bounds(x, y) {
            return None;
        }
        let k = self.offset(x as u32, y as u32);
        self.valid[k].then_some(self.pixels[k])
    }

    pub fn is_valid(&self, x: u32, y: u32) -> bool {
        self.valid[self.offset(x, y)]
    }

    pub fn set(&mut self, x: u32, y: u32, rgb: Rgb) {
        let k = self.offset(x, y);
        self.pixels[k] = rgb;
        self.valid[k] = true;
    }

    pub fn punch(&mut self, x: u32, y: u32) {
        let k = self.offset(x, y);
        self.pixels[k] = [0; 3];
        self.valid[k] = false;
    }

    /// Turns every pixel set in `holes` into a hole.
    pub fn apply_holes(&mut self, holes: &Mask) -> Result<(), RasterError> {
        self.check_dims(holes.width(), holes.height())?;
        for (x, y) in holes.iter_set() {
            self.punch(x, y);
        }
        Ok(())
    }

    pub fn hole_mask(&self) -> Mask {
        let mut m = Mask::new(self.width, self.height, false);
        for (k, v) in self.valid.iter().enumerate() {
            if !v {
                m.bits[k] = true;
            }
        }
        m
    }

    pub fn hole_count(&self) -> usize {
        self.valid.iter().filter(|v| !**v).count()
    }

    pub fn is_complete(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn validity(&self) -> &[bool] {
        &self.valid
    }

    pub(crate) fn check_dims(&self, w: u32, h: u32) -> Result<(), RasterError> {
        if (w, h) != (self.width, self.height) {
            return Err(RasterError::Dimensions {
                expected: (self.width, self.height),
                got: (w, h),
            });
        }
        Ok(())
    }

    /// Copy translated by `(dx, dy)`: output pixel `p` reads input `p - (dx, dy)`.
    /// Pixels with no source become holes.
    pub fn translated(&self, dx: i64, dy: i64) -> RasterImage {
        let mut out = RasterImage::empty(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                if let Some(v) = self.get(x as i64 - dx, y as i64 - dy) {
                    out.set(x, y, v);
                }
            }
        }
        out
    }

    /// New canvas grown by the given margins; the new area is holes.
    pub fn padded(&self, left: u32, right: u32, top: u32, bottom: u32) -> RasterImage {
        let mut out = RasterImage::empty(self.width + left + right, self.height + top + bottom);
        for y in 0..self.height {
            for x in 0..self.width {
                let k = self.offset(x, y);
                if self.valid[k] {
                    out.set(x + left, y + top, self.pixels[k]);
                }
            }
        }
        out
    }

    /// Mean absolute per-channel difference over pixels set in `region`
    /// (both images must be valid there).
    pub fn mean_l1(&self, other: &RasterImage, region: &Mask) -> f64 {
        let mut sum = 0u64;
        let mut n = 0u64;
        for (x, y) in region.iter_set() {
            let a = self.raw(x, y);
            let b = other.raw(x, y);
            for c in 0..3 {
                sum += (a[c] as i32 - b[c] as i32).unsigned_abs() as u64;
            }
            n += 3;
        }
        if n == 0 {
            0.0
        } else {
            sum as f64 / n as f64
        }
    }

    /// Fills remaining holes with the value of the nearest known pixel
    /// (multi-source breadth-first growth, 4-connected, scan order ties).
    pub fn diffuse_holes(&mut self) {
        if self.is_complete() || self.valid.iter().all(|v| !v) {
            return;
        }
        let w = self.width as i64;
        let h = self.height as i64;
        let mut frontier: Vec<usize> = (0..self.valid.len()).filter(|&k| self.valid[k]).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &k in &frontier {
                let (x, y) = (k as i64 % w, k as i64 / w);
                for (dx, dy) in [(0, -1), (-1, 0), (1, 0), (0, 1)] {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let q = (ny * w + nx) as usize;
                    if !self.valid[q] {
                        self.valid[q] = true;
                        self.pixels[q] = self.pixels[k];
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_masks_out_of_frame() {
        let img = RasterImage::from_fn(4, 3, |x, y| [x as u8, y as u8, 0]);
        let t = img.translated(1, -1);
        assert_eq!(t.get(0, 0), None);
        assert_eq!(t.get(1, 0), Some([0, 1, 0]));
        assert_eq!(t.get(3, 1), Some([2, 2, 0]));
        assert_eq!(t.get(2, 2), None);
        assert_eq!(t.raw(2, 2), [0, 0, 0]);
    }

    #[test]
    fn diffusion_fills_everything() {
        let mut img = RasterImage::filled(5, 5, [10, 20, 30]);
        img.set(4, 4, [200, 0, 0]);
        for x in 0..5 {
            img.punch(x, 2);
        }
        img.diffuse_holes();
        assert!(img.is_complete());
        assert_eq!(img.get(0, 2), Some([10, 20, 30]));
    }

    #[test]
    fn padding() {
        let img = RasterImage::filled(2, 2, [1, 1, 1]);
        let p = img.padded(1, 2, 0, 1);
        assert_eq!((p.width(), p.height()), (5, 3));
        assert_eq!(p.hole_count(), 15 - 4);
        assert_eq!(p.get(1, 0), Some([1, 1, 1]));
        assert_eq!(p.get(0, 0), None);
    }
}
