//! Row-major rasters.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A row-major `width x height` raster. Index `(x, y)` lives at `y * width + x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T> Grid<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::Dimension {
                width,
                height,
                len: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &T {
        &self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        self.data[y * self.width + x] = value;
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn ensure_same_dims<U>(&self, other: &Grid<U>) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::Mismatch {
                expected: self.dims(),
                found: other.dims(),
            });
        }
        Ok(())
    }
}

impl<T: Clone> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        Self::new(width, height, alloc::vec![value; width * height])
    }

    /// Moves the element at `(0, 0)` to `(width / 2, height / 2)`.
    pub fn fftshift(&self) -> Self {
        self.rolled(self.width / 2, self.height / 2)
    }

    /// Exact inverse of [`Grid::fftshift`], also for odd sizes.
    pub fn ifftshift(&self) -> Self {
        self.rolled(self.width - self.width / 2, self.height - self.height / 2)
    }

    fn rolled(&self, dx: usize, dy: usize) -> Self {
        let (w, h) = self.dims();
        let mut data = self.data.clone();
        for y in 0..h {
            for x in 0..w {
                data[((y + dy) % h) * w + (x + dx) % w] = self.data[y * w + x].clone();
            }
        }
        Grid {
            width: w,
            height: h,
            data,
        }
    }
}

/// Ranges at or below this fraction of the largest magnitude count as flat.
const FLAT_RANGE: f64 = 1e-12;

/// Min-max rescale to `[0, 1]`; a constant input maps to all zeros.
pub(crate) fn normalize_values(data: &[f64]) -> Vec<f64> {
    let (lo, hi) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    if !range.is_finite() || range <= FLAT_RANGE * lo.abs().max(hi.abs()) {
        return alloc::vec![0.0; data.len()];
    }
    data.iter().map(|&v| ((v - lo) / range).clamp(0.0, 1.0)).collect()
}

/// A real-valued grayscale image.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage(Grid<f64>);

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        Grid::new(width, height, data).map(Self)
    }

    pub fn from_grid(grid: Grid<f64>) -> Self {
        Self(grid)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Grid::filled(width, height, value).map(Self)
    }

    pub fn grid(&self) -> &Grid<f64> {
        &self.0
    }

    pub fn into_grid(self) -> Grid<f64> {
        self.0
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    pub fn data(&self) -> &[f64] {
        self.0.data()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        *self.0.get(x, y)
    }

    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.0.set(x, y, value)
    }
}

/// Affine rescale of intensities to `[0, 1]`. Constant images map to zeros.
pub fn normalize_image(img: &GrayImage) -> GrayImage {
    GrayImage(Grid {
        width: img.width(),
        height: img.height(),
        data: normalize_values(img.data()),
    })
}
