use super::GrayImage;
use crate::error::{Result, SdrError};

/// Per-pixel Sobel magnitude. The outer ring is always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl GradientField {
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }
}

/// Binary edge raster (true = edge pixel).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    pub width: usize,
    pub height: usize,
    pub mask: Vec<bool>,
}

impl EdgeMap {
    pub fn empty(width: usize, height: usize) -> Self {
        EdgeMap {
            width,
            height,
            mask: vec![false; width * height],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.mask[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// Edge binarization rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Fraction of the strongest magnitude in the image, in (0, 1].
    Relative(f64),
    /// Absolute magnitude, > 0.
    Absolute(f64),
}

/// Sobel response `(gx, gy)` at an interior pixel.
#[inline]
fn sobel_at(img: &GrayImage, x: usize, y: usize) -> (i32, i32) {
    let p = |dx: isize, dy: isize| -> i32 {
        i32::from(img.get(
            (x as isize + dx) as usize,
            (y as isize + dy) as usize,
        ))
    };
    let gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
    let gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
    (gx, gy)
}

pub fn sobel_magnitude(img: &GrayImage) -> GradientField {
    let (w, h) = (img.width(), img.height());
    let mut data = vec![0.0; w * h];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let (gx, gy) = sobel_at(img, x, y);
            data[y * w + x] = f64::from(gx).hypot(f64::from(gy));
        }
    }
    GradientField {
        width: w,
        height: h,
        data,
    }
}

/// Gradient direction rounded to one of the eight neighbour offsets.
fn quantized_direction(gx: i32, gy: i32) -> (isize, isize) {
    // tan(22.5 degrees)
    const T: f64 = 0.414_213_562_373_095;
    let (fx, fy) = (f64::from(gx), f64::from(gy));
    let sx = gx.signum() as isize;
    let sy = gy.signum() as isize;
    if fy.abs() <= T * fx.abs() {
        (sx, 0)
    } else if fx.abs() <= T * fy.abs() {
        (0, sy)
    } else {
        (sx, sy)
    }
}

/// Keep only edge pixels whose magnitude is a local maximum across the edge.
///
/// The magnitude at `p` is compared with its two neighbours along the
/// quantized gradient direction `d`: `p` survives when `m(p) >= m(p - d)` and
/// `m(p) > m(p + d)`. A step between two flat regions gives equal magnitudes
/// on both sides; the asymmetric test keeps exactly the pixel on the bright
/// side, so the result is one pixel wide.
pub fn suppress_non_maxima(img: &GrayImage, grad: &GradientField, edges: &EdgeMap) -> EdgeMap {
    let (w, h) = (edges.width, edges.height);
    let mut out = EdgeMap::empty(w, h);
    for y in 1..h.saturating_sub(1) {
        for x in 1..w.saturating_sub(1) {
            if !edges.get(x, y) {
                continue;
            }
            let (gx, gy) = sobel_at(img, x, y);
            let (dx, dy) = quantized_direction(gx, gy);
            let m = grad.get(x, y);
            let at = |sx: isize, sy: isize| grad.get((x as isize + sx) as usize, (y as isize + sy) as usize);
            if m >= at(-dx, -dy) && m > at(dx, dy) {
                out.set(x, y, true);
            }
        }
    }
    out
}

pub fn threshold_edges(grad: &GradientField, threshold: Threshold) -> Result<EdgeMap> {
    let cut = match threshold {
        Threshold::Relative(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(SdrError::invalid(format!(
                    "relative threshold {f} outside (0, 1]"
                )));
            }
            let max = grad.max();
            if max == 0.0 {
                return Ok(EdgeMap::empty(grad.width, grad.height));
            }
            f * max
        }
        Threshold::Absolute(v) => {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SdrError::invalid(format!(
                    "absolute threshold {v} must be positive"
                )));
            }
            v
        }
    };
    let mut edges = EdgeMap::empty(grad.width, grad.height);
    for y in 1..grad.height - 1 {
        for x in 1..grad.width - 1 {
            if grad.get(x, y) >= cut {
                edges.set(x, y, true);
            }
        }
    }
    Ok(edges)
}
