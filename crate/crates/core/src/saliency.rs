//! Fourier-domain saliency maps.
//!
//! Every map reconstructs `|F⁻¹[M(u, v) · exp(i P(u, v))]|` for some
//! magnitude `M` and the source phase `P`, then min-max normalizes to
//! `[0, 1]`. Filtering with zero padding breaks conjugate symmetry, so the
//! reconstruction is complex; its modulus is the saliency.

use alloc::vec::Vec;

use crate::error::Result;
use crate::filters::{
    box_kernel, convolve2, filter_in_layout, gaussian_filter, gaussian_kernel, percentile_filter,
    GaussianFilterSpec, PercentileFilterSpec, SpectrumLayout,
};
use crate::grid::{normalize_values, GrayImage, Grid};
use crate::spectrum::{
    dft2_forward, dft2_inverse_complex, log_amplitude, recombine_magnitude, split_amp_phase, PhaseSpectrum,
};

/// Non-DC energy below this fraction of the DC energy marks an input as
/// constant.
const DEGENERATE_ENERGY_RATIO: f64 = 1e-20;

/// Saliency in `[0, 1]`, same dimensions as the source image.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    grid: Grid<f64>,
    degenerate: bool,
}

impl SaliencyMap {
    /// Wraps values already in `[0, 1]`.
    pub fn new(grid: Grid<f64>) -> Result<Self> {
        if let Some(bad) = grid.data().iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
            return Err(crate::error::invalid(alloc::format!("saliency values must lie in [0, 1], got {bad}")));
        }
        Ok(Self { grid, degenerate: false })
    }

    /// Normalizes `raw` to `[0, 1]`.
    pub fn from_raw(raw: Grid<f64>) -> Self {
        let data = normalize_values(raw.data());
        let degenerate = data.iter().all(|&v| v == 0.0);
        let grid = Grid::new(raw.width(), raw.height(), data).expect("dims preserved");
        Self { grid, degenerate }
    }

    pub(crate) fn degenerate_like(width: usize, height: usize) -> Self {
        Self {
            grid: Grid::filled(width, height, 0.0).expect("nonzero dims"),
            degenerate: true,
        }
    }

    pub fn grid(&self) -> &Grid<f64> {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        self.grid.data()
    }

    pub fn width(&self) -> usize {
        self.grid.width()
    }

    pub fn height(&self) -> usize {
        self.grid.height()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        *self.grid.get(x, y)
    }

    /// Set when the source carried no structure (constant image) or the
    /// reconstruction was flat. Such maps are all zeros.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Position of the largest value; first in row-major order on ties.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, &v) in self.data().iter().enumerate() {
            if v > self.data()[best] {
                best = i;
            }
        }
        (best % self.width(), best / self.width())
    }

    pub fn as_image(&self) -> GrayImage {
        GrayImage::from_grid(self.grid.clone())
    }
}

/// How the log-domain residual becomes a reconstruction magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidualMagnitude {
    /// `exp(R)`: undo the log taken when forming the residual.
    #[default]
    Exponential,
    /// `R` itself in the magnitude slot.
    Raw,
}

/// `R = L − h_n ⋆ L` with `L = log A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSpectrum(Grid<f64>);

impl ResidualSpectrum {
    pub fn grid(&self) -> &Grid<f64> {
        &self.0
    }

    pub fn data(&self) -> &[f64] {
        self.0.data()
    }
}

pub(crate) fn is_constant(img: &GrayImage) -> bool {
    let n = img.data().len() as f64;
    let mean = img.data().iter().sum::<f64>() / n;
    let spread: f64 = img.data().iter().map(|v| (v - mean) * (v - mean)).sum();
    spread <= DEGENERATE_ENERGY_RATIO * (mean * mean * n).max(f64::MIN_POSITIVE)
}

pub(crate) fn reconstruct(magnitude: &Grid<f64>, phase: &PhaseSpectrum) -> Result<SaliencyMap> {
    let spec = recombine_magnitude(magnitude, phase)?;
    let field = dft2_inverse_complex(&spec);
    Ok(SaliencyMap::from_raw(field.map(|z| z.norm())))
}

pub fn residual_spectrum(img: &GrayImage, n: usize) -> Result<ResidualSpectrum> {
    let (amp, _) = split_amp_phase(&dft2_forward(img));
    let log = log_amplitude(&amp);
    let smooth = convolve2(&log, &box_kernel(n)?)?;
    let data: Vec<f64> = log.data().iter().zip(smooth.data()).map(|(l, s)| l - s).collect();
    Ok(ResidualSpectrum(Grid::new(img.width(), img.height(), data)?))
}

/// Spectral-residual saliency with an `n x n` box average (default `n = 3`)
/// and `exp(R)` as the magnitude.
pub fn spectral_residual_map(img: &GrayImage, n: usize) -> Result<SaliencyMap> {
    spectral_residual_map_with(img, n, ResidualMagnitude::default())
}

pub fn spectral_residual_map_with(img: &GrayImage, n: usize, mode: ResidualMagnitude) -> Result<SaliencyMap> {
    let kernel = box_kernel(n)?;
    if is_constant(img) {
        return Ok(SaliencyMap::degenerate_like(img.width(), img.height()));
    }
    let (amp, phase) = split_amp_phase(&dft2_forward(img));
    let log = log_amplitude(&amp);
    let smooth = convolve2(&log, &kernel)?;
    let magnitude = Grid::new(
        img.width(),
        img.height(),
        log.data()
            .iter()
            .zip(smooth.data())
            .map(|(l, s)| match mode {
                ResidualMagnitude::Exponential => libm::exp(l - s),
                ResidualMagnitude::Raw => l - s,
            })
            .collect(),
    )?;
    reconstruct(&magnitude, &phase)
}

/// Reconstruction from the phase spectrum alone (unit amplitude).
pub fn phase_only_map(img: &GrayImage) -> Result<SaliencyMap> {
    if is_constant(img) {
        return Ok(SaliencyMap::degenerate_like(img.width(), img.height()));
    }
    let (_, phase) = split_amp_phase(&dft2_forward(img));
    let ones = Grid::filled(img.width(), img.height(), 1.0)?;
    reconstruct(&ones, &phase)
}

/// Reconstruction from the Gaussian-smoothed amplitude `A ⋆ g`.
pub fn smoothed_amplitude_map(img: &GrayImage, g: &GaussianFilterSpec) -> Result<SaliencyMap> {
    smoothed_amplitude_map_in(img, g, SpectrumLayout::default())
}

pub fn smoothed_amplitude_map_in(
    img: &GrayImage,
    g: &GaussianFilterSpec,
    layout: SpectrumLayout,
) -> Result<SaliencyMap> {
    if is_constant(img) {
        return Ok(SaliencyMap::degenerate_like(img.width(), img.height()));
    }
    let (amp, phase) = split_amp_phase(&dft2_forward(img));
    let smooth = filter_in_layout(&amp, layout, |a| gaussian_filter(a, g))?;
    reconstruct(smooth.grid(), &phase)
}

/// Reconstruction from the percentile-filtered amplitude.
pub fn percentile_saliency_map(img: &GrayImage, spec: &PercentileFilterSpec) -> Result<SaliencyMap> {
    percentile_saliency_map_in(img, spec, SpectrumLayout::default())
}

pub fn percentile_saliency_map_in(
    img: &GrayImage,
    spec: &PercentileFilterSpec,
    layout: SpectrumLayout,
) -> Result<SaliencyMap> {
    if is_constant(img) {
        return Ok(SaliencyMap::degenerate_like(img.width(), img.height()));
    }
    let (amp, phase) = split_amp_phase(&dft2_forward(img));
    let filtered = filter_in_layout(&amp, layout, |a| percentile_filter(a, spec))?;
    reconstruct(filtered.grid(), &phase)
}

/// Square, smooth spatially with `g` (zero padding), renormalize.
pub fn postprocess(map: &SaliencyMap, g: &GaussianFilterSpec) -> Result<SaliencyMap> {
    let squared = map.grid.map(|v| v * v);
    let smooth = convolve2(&squared, &gaussian_kernel(g)?)?;
    let mut out = SaliencyMap::from_raw(smooth);
    out.degenerate |= map.degenerate;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_input_is_degenerate_zero() {
        let img = GrayImage::filled(16, 16, 0.7).unwrap();
        let spec = PercentileFilterSpec::new(10.0, 3).unwrap();
        let g = GaussianFilterSpec::new(1.0).unwrap();
        for map in [
            spectral_residual_map(&img, 3).unwrap(),
            phase_only_map(&img).unwrap(),
            smoothed_amplitude_map(&img, &g).unwrap(),
            percentile_saliency_map(&img, &spec).unwrap(),
        ] {
            assert!(map.is_degenerate());
            assert!(map.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn impulse_phase_only_peaks_at_impulse() {
        let mut img = GrayImage::filled(16, 16, 0.0).unwrap();
        img.set(5, 9, 1.0);
        let map = phase_only_map(&img).unwrap();
        assert_eq!(map.argmax(), (5, 9));
        assert!(!map.is_degenerate());
    }

    #[test]
    fn postprocess_uniform_stays_zero() {
        let map = SaliencyMap::new(Grid::filled(8, 8, 0.5).unwrap()).unwrap();
        let g = GaussianFilterSpec::new(0.05).unwrap();
        let out = postprocess(&map, &g).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn even_resid_box_rejected() {
        let img = GrayImage::filled(8, 8, 0.0).unwrap();
        assert!(spectral_residual_map(&img, 4).is_err());
    }
}
