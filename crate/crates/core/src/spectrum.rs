//! Frequency-domain representations of images.
//!
//! Spectra keep the DC bin at `(0, 0)`. The forward transform is
//! unnormalized and the inverse carries the `1 / (width * height)` factor.
//! Centering is only a display concern (see [`Grid::fftshift`]).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fft::Fft1d;
use crate::grid::{GrayImage, Grid};

/// Additive floor inside [`log_amplitude`] so empty bins stay finite.
pub const LOG_EPSILON: f64 = 1e-12;

pub type ComplexSpectrum = Grid<Complex64>;

/// Per-bin modulus of a spectrum. Entries are nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpectrum(Grid<f64>);

/// Per-bin principal argument in `(-π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpectrum(Grid<f64>);

impl AmplitudeSpectrum {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        Self::from_grid(Grid::new(width, height, data)?)
    }

    pub fn from_grid(grid: Grid<f64>) -> Result<Self> {
        if let Some(bad) = grid.data().iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(invalid(alloc::format!("amplitude entries must be >= 0, got {bad}")));
        }
        Ok(Self(grid))
    }

    /// Skips the nonnegativity scan; callers guarantee it.
    pub(crate) fn from_grid_unchecked(grid: Grid<f64>) -> Self {
        debug_assert!(grid.data().iter().all(|v| *v >= 0.0));
        Self(grid)
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
}

impl PhaseSpectrum {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        let grid = Grid::new(width, height, data)?;
        if let Some(bad) = grid.data().iter().find(|v| !(**v > -PI && **v <= PI)) {
            return Err(invalid(alloc::format!("phase entries must lie in (-pi, pi], got {bad}")));
        }
        Ok(Self(grid))
    }

    pub fn grid(&self) -> &Grid<f64> {
        &self.0
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
}

fn transform_rows_cols(grid: &mut Grid<Complex64>, inverse: bool) {
    let (w, h) = grid.dims();
    let row_plan = Fft1d::new(w);
    let col_plan = if h == w { row_plan.clone() } else { Fft1d::new(h) };
    let mut buf_in = vec![Complex64::new(0.0, 0.0); w.max(h)];
    let mut buf_out = buf_in.clone();

    let data = grid.data_mut();
    for y in 0..h {
        let row = &mut data[y * w..(y + 1) * w];
        buf_in[..w].copy_from_slice(row);
        if inverse {
            row_plan.inverse(&buf_in[..w], &mut buf_out[..w]);
        } else {
            row_plan.forward(&buf_in[..w], &mut buf_out[..w]);
        }
        row.copy_from_slice(&buf_out[..w]);
    }
    for x in 0..w {
        for y in 0..h {
            buf_in[y] = data[y * w + x];
        }
        if inverse {
            col_plan.inverse(&buf_in[..h], &mut buf_out[..h]);
        } else {
            col_plan.forward(&buf_in[..h], &mut buf_out[..h]);
        }
        for y in 0..h {
            data[y * w + x] = buf_out[y];
        }
    }
}

/// Unnormalized 2D DFT of a real image.
pub fn dft2_forward(img: &GrayImage) -> ComplexSpectrum {
    let mut grid = img.grid().map(|&v| Complex64::new(v, 0.0));
    transform_rows_cols(&mut grid, false);
    grid
}

/// Unnormalized 2D DFT of a complex field.
pub fn dft2_forward_complex(field: &Grid<Complex64>) -> ComplexSpectrum {
    let mut grid = field.clone();
    transform_rows_cols(&mut grid, false);
    grid
}

/// Inverse 2D DFT with `1 / (width * height)` normalization, keeping the
/// imaginary part.
pub fn dft2_inverse_complex(spec: &ComplexSpectrum) -> Grid<Complex64> {
    let mut grid = spec.clone();
    transform_rows_cols(&mut grid, true);
    let scale = 1.0 / (grid.width() * grid.height()) as f64;
    for z in grid.data_mut() {
        *z *= scale;
    }
    grid
}

/// Inverse 2D DFT returning the real part.
///
/// For conjugate-symmetric input the discarded imaginary residue is below
/// `1e-6` (checked in debug builds). The result is not re-normalized.
pub fn dft2_inverse(spec: &ComplexSpectrum) -> GrayImage {
    let field = dft2_inverse_complex(spec);
    #[cfg(debug_assertions)]
    if is_conjugate_symmetric(spec, 1e-9) {
        let max_imag = field.data().iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        debug_assert!(max_imag < 1e-6, "imaginary residue {max_imag}");
    }
    GrayImage::from_grid(field.map(|z| z.re))
}

/// `true` when `spec[u, v] == conj(spec[-u mod W, -v mod H])` for every bin,
/// within `tol` relative to the largest modulus.
pub fn is_conjugate_symmetric(spec: &ComplexSpectrum, tol: f64) -> bool {
    let (w, h) = spec.dims();
    let scale = spec.data().iter().fold(1.0f64, |m, z| m.max(z.norm()));
    (0..h).all(|v| {
        (0..w).all(|u| {
            let a = *spec.get(u, v);
            let b = *spec.get((w - u) % w, (h - v) % h);
            (a - b.conj()).norm() <= tol * scale
        })
    })
}

/// Split into modulus and principal argument. Zero bins get phase 0.
pub fn split_amp_phase(spec: &ComplexSpectrum) -> (AmplitudeSpectrum, PhaseSpectrum) {
    let amp = spec.map(|z| libm::hypot(z.re, z.im));
    let phase = spec.map(|z| {
        if z.re == 0.0 && z.im == 0.0 {
            0.0
        } else {
            let a = libm::atan2(z.im, z.re);
            // atan2 returns -π for (negative, -0.0); fold onto π.
            if a <= -PI {
                PI
            } else {
                a
            }
        }
    });
    (AmplitudeSpectrum(amp), PhaseSpectrum(phase))
}

/// Bin-wise `amp * exp(i * phase)`.
pub fn recombine(amp: &AmplitudeSpectrum, phase: &PhaseSpectrum) -> Result<ComplexSpectrum> {
    recombine_magnitude(amp.grid(), phase)
}

/// Like [`recombine`] but accepts any real magnitude (possibly negative),
/// as needed when a log-domain residual is used directly.
pub fn recombine_magnitude(magnitude: &Grid<f64>, phase: &PhaseSpectrum) -> Result<ComplexSpectrum> {
    magnitude.ensure_same_dims(phase.grid())?;
    let data = magnitude
        .data()
        .iter()
        .zip(phase.data())
        .map(|(&m, &p)| Complex64::new(m * libm::cos(p), m * libm::sin(p)))
        .collect();
    Grid::new(magnitude.width(), magnitude.height(), data)
}

/// Element-wise `ln(amp + ε)` with ε = [`LOG_EPSILON`]. The result can be
/// negative, so it is returned as a plain real grid.
pub fn log_amplitude(amp: &AmplitudeSpectrum) -> Grid<f64> {
    amp.grid().map(|&a| libm::log(a + LOG_EPSILON))
}

pub fn amplitude(spec: &ComplexSpectrum) -> AmplitudeSpectrum {
    AmplitudeSpectrum(spec.map(|z| libm::hypot(z.re, z.im)))
}
