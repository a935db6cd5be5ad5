use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::grid::Grid;

/// Isotropic Gaussian with standard deviation `sigma` (bins), truncated at
/// `radius = ceil(3 sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFilterSpec {
    sigma: f64,
}

impl GaussianFilterSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid(alloc::format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn radius(&self) -> usize {
        libm::ceil(3.0 * self.sigma) as usize
    }

    /// Continuous 2D Gaussian density at offset `(x, y)`.
    pub fn density(&self, x: f64, y: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        libm::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * PI * s2)
    }
}

/// Square, odd-sided correlation kernel with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct LowPassKernel {
    n: usize,
    weights: Vec<f64>,
}

impl LowPassKernel {
    pub fn side(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, dx: isize, dy: isize) -> f64 {
        let r = (self.n / 2) as isize;
        self.weights[((dy + r) as usize) * self.n + (dx + r) as usize]
    }
}

pub fn box_kernel(n: usize) -> Result<LowPassKernel> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(invalid(alloc::format!("box kernel side must be odd, got {n}")));
    }
    let w = 1.0 / (n * n) as f64;
    Ok(LowPassKernel {
        n,
        weights: alloc::vec![w; n * n],
    })
}

/// Samples the Gaussian density on the integer grid within `radius`, then
/// rescales so the weights sum to one.
pub fn gaussian_kernel(spec: &GaussianFilterSpec) -> Result<LowPassKernel> {
    let r = spec.radius() as isize;
    let n = (2 * r + 1) as usize;
    let mut weights = Vec::with_capacity(n * n);
    for dy in -r..=r {
        for dx in -r..=r {
            weights.push(spec.density(dx as f64, dy as f64));
        }
    }
    let sum: f64 = weights.iter().sum();
    for v in &mut weights {
        *v /= sum;
    }
    Ok(LowPassKernel { n, weights })
}

/// 2D correlation with zero padding outside the field.
pub fn convolve2(field: &Grid<f64>, kernel: &LowPassKernel) -> Result<Grid<f64>> {
    let (w, h) = field.dims();
    if kernel.n >= 2 * w || kernel.n >= 2 * h {
        return Err(invalid(alloc::format!(
            "kernel side {} too large for {w}x{h} field",
            kernel.n
        )));
    }
    let r = (kernel.n / 2) as isize;
    let data = field.data();
    Grid::from_fn(w, h, |x, y| {
        let mut acc = 0.0;
        let ky0 = (-r).max(-(y as isize));
        let ky1 = r.min(h as isize - 1 - y as isize);
        let kx0 = (-r).max(-(x as isize));
        let kx1 = r.min(w as isize - 1 - x as isize);
        for dy in ky0..=ky1 {
            let row = ((y as isize + dy) as usize) * w;
            let krow = ((dy + r) as usize) * kernel.n;
            for dx in kx0..=kx1 {
                acc += kernel.weights[krow + (dx + r) as usize] * data[row + (x as isize + dx) as usize];
            }
        }
        acc
    })
}
