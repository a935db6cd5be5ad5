use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Result};
use crate::filters::{
    filter_in_layout, gaussian_filter, percentile_filter, GaussianFilterSpec, PercentileFilterSpec, SpectrumLayout,
};
use crate::grid::{normalize_image, GrayImage};
use crate::saliency::{is_constant, reconstruct, SaliencyMap};
use crate::spectrum::{dft2_forward, split_amp_phase, AmplitudeSpectrum, PhaseSpectrum};

/// Default percentile filter: p = 10 with a window of 0.2 image widths.
pub const DEFAULT_P: f64 = 10.0;
pub const DEFAULT_WF: f64 = 0.2;
pub const DEFAULT_SIGMA: f64 = 2.0;

/// What a classifier sees for each image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureKind {
    /// Min-max normalized pixels.
    Raw,
    /// Unfiltered amplitude spectrum.
    Amplitude,
    /// Percentile-filtered amplitude spectrum.
    PercentileAmplitude(PercentileFilterSpec),
    /// Gaussian-filtered amplitude spectrum.
    GaussianAmplitude(GaussianFilterSpec),
    /// Saliency map reconstructed from the percentile-filtered amplitude.
    PercentileSaliency(PercentileFilterSpec),
}

impl FeatureKind {
    pub const CODES: [&'static str; 5] = ["RAW", "A", "A_P", "A_G", "S_P"];

    pub fn code(&self) -> &'static str {
        match self {
            FeatureKind::Raw => "RAW",
            FeatureKind::Amplitude => "A",
            FeatureKind::PercentileAmplitude(_) => "A_P",
            FeatureKind::GaussianAmplitude(_) => "A_G",
            FeatureKind::PercentileSaliency(_) => "S_P",
        }
    }

    /// `key=value` parameter summary, empty for parameter-free kinds.
    pub fn params(&self) -> String {
        match self {
            FeatureKind::Raw | FeatureKind::Amplitude => String::new(),
            FeatureKind::PercentileAmplitude(s) | FeatureKind::PercentileSaliency(s) => {
                format!("p={} w={}", s.p(), s.w())
            }
            FeatureKind::GaussianAmplitude(g) => format!("sigma={}", g.sigma()),
        }
    }

    /// Builds a kind from its code and optional filter parameters; the
    /// percentile window is bound to `width`. Parametric kinds without their
    /// parameters are rejected.
    pub fn from_parts(code: &str, p: Option<f64>, wf: Option<f64>, sigma: Option<f64>, width: usize) -> Result<Self> {
        let percentile = || -> Result<PercentileFilterSpec> {
            match (p, wf) {
                (Some(p), Some(wf)) => PercentileFilterSpec::from_fraction(p, wf, width),
                _ => Err(invalid(format!("feature {code} needs both p and wf"))),
            }
        };
        match code.trim().to_ascii_uppercase().as_str() {
            "RAW" => Ok(FeatureKind::Raw),
            "A" => Ok(FeatureKind::Amplitude),
            "A_P" | "AP" => Ok(FeatureKind::PercentileAmplitude(percentile()?)),
            "S_P" | "SP" => Ok(FeatureKind::PercentileSaliency(percentile()?)),
            "A_G" | "AG" => match sigma {
                Some(s) => Ok(FeatureKind::GaussianAmplitude(GaussianFilterSpec::new(s)?)),
                None => Err(invalid("feature A_G needs sigma")),
            },
            other => Err(invalid(format!("unknown feature kind {other:?}"))),
        }
    }

    pub fn percentile_spec(&self) -> Option<&PercentileFilterSpec> {
        match self {
            FeatureKind::PercentileAmplitude(s) | FeatureKind::PercentileSaliency(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            f.write_str(self.code())
        } else {
            write!(f, "{}({})", self.code(), params)
        }
    }
}

/// Flattened feature vector of length `width * height`.
pub fn extract_features(img: &GrayImage, kind: &FeatureKind) -> Result<Vec<f64>> {
    extract_features_in(img, kind, SpectrumLayout::default())
}

pub fn extract_features_in(img: &GrayImage, kind: &FeatureKind, layout: SpectrumLayout) -> Result<Vec<f64>> {
    PreparedImage::new(img).features(kind, layout)
}

/// An image with its spectrum decomposed once, for extracting several
/// feature kinds without repeating the transform.
#[derive(Debug, Clone)]
pub struct PreparedImage {
    raw: Vec<f64>,
    width: usize,
    height: usize,
    amp: AmplitudeSpectrum,
    phase: PhaseSpectrum,
    constant: bool,
}

impl PreparedImage {
    pub fn new(img: &GrayImage) -> Self {
        let (amp, phase) = split_amp_phase(&dft2_forward(img));
        Self {
            raw: normalize_image(img).data().to_vec(),
            width: img.width(),
            height: img.height(),
            amp,
            phase,
            constant: is_constant(img),
        }
    }

    pub fn amplitude(&self) -> &AmplitudeSpectrum {
        &self.amp
    }

    pub fn features(&self, kind: &FeatureKind, layout: SpectrumLayout) -> Result<Vec<f64>> {
        Ok(match kind {
            FeatureKind::Raw => self.raw.clone(),
            FeatureKind::Amplitude => self.amp.data().to_vec(),
            FeatureKind::PercentileAmplitude(spec) => {
                filter_in_layout(&self.amp, layout, |a| percentile_filter(a, spec))?.data().to_vec()
            }
            FeatureKind::GaussianAmplitude(g) => {
                filter_in_layout(&self.amp, layout, |a| gaussian_filter(a, g))?.data().to_vec()
            }
            FeatureKind::PercentileSaliency(spec) => {
                let filtered = filter_in_layout(&self.amp, layout, |a| percentile_filter(a, spec))?;
                if self.constant {
                    SaliencyMap::degenerate_like(self.width, self.height).data().to_vec()
                } else {
                    reconstruct(filtered.grid(), &self.phase)?.data().to_vec()
                }
            }
        })
    }
}
