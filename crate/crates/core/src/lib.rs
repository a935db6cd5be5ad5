//! Amplitude-spectrum filtering for same-different visual reasoning.
//!
//! The crate is `no_std` and only needs an allocator. It covers:
//!
//! - [`spectrum`]: 2D DFT, amplitude/phase split and reconstruction.
//! - [`filters`]: percentile (rank-order) and Gaussian filtering of spectra.
//! - [`saliency`]: spectral-residual, phase-only, smoothed-amplitude and
//!   percentile saliency maps.
//! - [`taskgen`]: procedural same-different task images and test patterns.
//! - [`fewshot`]: feature extraction, k-NN and the trial/grid protocol.
//!
//! IO, file formats and the command line live in the `specsal` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod fewshot;
pub mod fft;
pub mod filters;
pub mod grid;
pub mod rng;
pub mod saliency;
pub mod spectrum;
pub mod taskgen;

pub use error::{Error, Result};
pub use grid::{GrayImage, Grid};
pub use spectrum::{AmplitudeSpectrum, ComplexSpectrum, PhaseSpectrum};

/// Side length of every generated task image.
pub const IMAGE_SIZE: usize = 96;
