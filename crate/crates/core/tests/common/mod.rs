//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use proptest::prelude::*;
use specsal_core::spectrum::Complex64;
use specsal_core::{GrayImage, Grid};

/// Direct double-loop 2D DFT, `sign = -1` forward, `+1` inverse (unscaled).
pub fn brute_dft(w: usize, h: usize, input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); w * h];
    for v in 0..h {
        for u in 0..w {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..h {
                for x in 0..w {
                    let t = sign * 2.0 * PI * ((u * x) as f64 / w as f64 + (v * y) as f64 / h as f64);
                    acc += input[y * w + x] * Complex64::new(t.cos(), t.sin());
                }
            }
            out[v * w + u] = acc;
        }
    }
    out
}

/// Materializes each window with zeros outside the field, sorts it and
/// takes the `ceil(p * w^2 / 100)`-th smallest.
pub fn sort_percentile(w: usize, h: usize, data: &[f64], p: f64, win: usize) -> Vec<f64> {
    let r = (win / 2) as isize;
    let n = win * win;
    let k = ((p * n as f64 / 100.0).ceil() as usize).clamp(1, n);
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut window = Vec::with_capacity(n);
            for dy in -r..=r {
                for dx in -r..=r {
                    let (xx, yy) = (x + dx, y + dy);
                    let inside = xx >= 0 && yy >= 0 && xx < w as isize && yy < h as isize;
                    window.push(if inside { data[yy as usize * w + xx as usize] } else { 0.0 });
                }
            }
            window.sort_by(|a, b| a.partial_cmp(b).unwrap());
            out.push(window[k - 1]);
        }
    }
    out
}

/// Zero-padded correlation with a square kernel of odd side `n`.
pub fn brute_correlate(w: usize, h: usize, data: &[f64], kernel: &[f64], n: usize) -> Vec<f64> {
    let r = (n / 2) as isize;
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for ky in 0..n as isize {
                for kx in 0..n as isize {
                    let (xx, yy) = (x + kx - r, y + ky - r);
                    if xx >= 0 && yy >= 0 && xx < w as isize && yy < h as isize {
                        acc += kernel[(ky * n as isize + kx) as usize] * data[yy as usize * w + xx as usize];
                    }
                }
            }
            out[(y * w as isize + x) as usize] = acc;
        }
    }
    out
}

pub fn min_max(v: &[f64]) -> Vec<f64> {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 1e-12 * hi.abs().max(lo.abs()) {
        return vec![0.0; v.len()];
    }
    v.iter().map(|x| (x - lo) / (hi - lo)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn image(w: usize, h: usize, data: Vec<f64>) -> GrayImage {
    GrayImage::from_grid(Grid::new(w, h, data).unwrap())
}

pub fn real_to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

pub fn arb_image(w: usize, h: usize) -> impl Strategy<Value = GrayImage> {
    prop::collection::vec(0.0f64..1.0, w * h).prop_map(move |d| image(w, h, d))
}

pub fn arb_field(w: usize, h: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..100.0, w * h)
}
