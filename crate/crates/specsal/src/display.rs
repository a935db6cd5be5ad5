//! Display renderings. These never feed back into computation.

use specsal_core::grid::normalize_image;
use specsal_core::{AmplitudeSpectrum, GrayImage};

/// `log(1 + A)`, DC moved to the center, min-max normalized.
pub fn spectrum_image(amp: &AmplitudeSpectrum) -> GrayImage {
    let log = amp.grid().map(|a| a.ln_1p()).fftshift();
    normalize_image(&GrayImage::from_grid(log))
}
