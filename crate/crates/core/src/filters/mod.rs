//! Peak suppression on amplitude spectra: percentile (rank-order) and
//! Gaussian filters with zero padding outside the field.

mod kernel;
mod percentile;

pub use kernel::{box_kernel, convolve2, gaussian_kernel, GaussianFilterSpec, LowPassKernel};
pub use percentile::{
    percentile_filter, percentile_filter_fast, percentile_filter_naive, PercentileFilterSpec,
};

use crate::error::Result;
use crate::grid::Grid;
use crate::spectrum::AmplitudeSpectrum;

/// Storage layout a spectrum is filtered in.
///
/// Zero padding makes the two layouts disagree near the spectrum edges:
/// unshifted keeps DC in the corner where most of its window is padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectrumLayout {
    /// DC at `(0, 0)`, as produced by the forward transform.
    #[default]
    Unshifted,
    /// DC moved to the center before filtering and moved back afterwards.
    Centered,
}

impl SpectrumLayout {
    pub fn name(self) -> &'static str {
        match self {
            SpectrumLayout::Unshifted => "unshifted",
            SpectrumLayout::Centered => "centered",
        }
    }
}

/// Applies `filter` to `amp` in the requested layout and returns the result
/// in the DC-at-origin layout.
pub fn filter_in_layout(
    amp: &AmplitudeSpectrum,
    layout: SpectrumLayout,
    filter: impl FnOnce(&AmplitudeSpectrum) -> Result<AmplitudeSpectrum>,
) -> Result<AmplitudeSpectrum> {
    match layout {
        SpectrumLayout::Unshifted => filter(amp),
        SpectrumLayout::Centered => {
            let shifted = AmplitudeSpectrum::from_grid_unchecked(amp.grid().fftshift());
            let out = filter(&shifted)?;
            Ok(AmplitudeSpectrum::from_grid_unchecked(out.grid().ifftshift()))
        }
    }
}

/// Gaussian smoothing of an amplitude spectrum (`A ⋆ g`).
pub fn gaussian_filter(amp: &AmplitudeSpectrum, spec: &GaussianFilterSpec) -> Result<AmplitudeSpectrum> {
    let kernel = gaussian_kernel(spec)?;
    let out: Grid<f64> = convolve2(amp.grid(), &kernel)?;
    // A nonnegative kernel over nonnegative data stays nonnegative, but
    // rounding may leave -0.0-sized noise.
    Ok(AmplitudeSpectrum::from_grid_unchecked(out.map(|v| v.max(0.0))))
}
