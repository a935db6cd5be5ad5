use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use super::mask::BitMask;
use crate::error::{invalid, Error, Result};
use crate::rng::rng_from_seed;

pub const MIN_SHAPE_SIZE: usize = 8;
pub const MAX_SHAPE_SIZE: usize = 64;
/// Angular samples along the contour.
pub const CONTOUR_SAMPLES: usize = 64;
const HARMONICS: core::ops::RangeInclusive<usize> = 2..=6;
const MAX_AMPLITUDE: f64 = 0.25;
/// Radius factors below this are rejected so the outline stays star-shaped
/// with visible arms.
const MIN_RADIUS_FACTOR: f64 = 0.2;
const MAX_SHAPE_ATTEMPTS: usize = 10_000;

/// Closed polyline `radius(θ) = r0 (1 + Σ a_k cos(kθ + φ_k))` inside a
/// `size x size` box. The last point repeats the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeContour {
    pub points: Vec<(f64, f64)>,
    pub id: u64,
    pub size: usize,
}

impl ShapeContour {
    /// Builds the contour for explicit harmonics `(k, a_k, φ_k)`.
    pub fn from_harmonics(size: usize, harmonics: &[(usize, f64, f64)], id: u64) -> Result<Self> {
        if !(MIN_SHAPE_SIZE..=MAX_SHAPE_SIZE).contains(&size) {
            return Err(invalid(alloc::format!(
                "shape size {size} outside [{MIN_SHAPE_SIZE}, {MAX_SHAPE_SIZE}]"
            )));
        }
        let factors: Vec<f64> = (0..CONTOUR_SAMPLES)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / CONTOUR_SAMPLES as f64;
                1.0 + harmonics
                    .iter()
                    .map(|&(k, a, phi)| a * libm::cos(k as f64 * theta + phi))
                    .sum::<f64>()
            })
            .collect();
        let max_factor = factors.iter().cloned().fold(f64::MIN, f64::max);
        let half = (size - 1) as f64 / 2.0;
        let r0 = half / max_factor;
        let mut points: Vec<(f64, f64)> = factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let theta = 2.0 * PI * i as f64 / CONTOUR_SAMPLES as f64;
                (half + r0 * f * libm::cos(theta), half + r0 * f * libm::sin(theta))
            })
            .collect();
        points.push(points[0]);
        Ok(Self { points, id, size })
    }

    pub fn min_radius_factor(&self) -> f64 {
        let half = (self.size - 1) as f64 / 2.0;
        let radii = self.points.iter().map(|&(x, y)| libm::hypot(x - half, y - half));
        let (lo, hi) = radii.fold((f64::MAX, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        lo / hi
    }

    pub fn is_closed(&self) -> bool {
        self.points.first() == self.points.last()
    }

    pub fn fits_box(&self) -> bool {
        let hi = (self.size - 1) as f64 + 1e-9;
        self.points.iter().all(|&(x, y)| x >= -1e-9 && y >= -1e-9 && x <= hi && y <= hi)
    }

    /// Exhaustive check over non-adjacent segment pairs.
    pub fn self_intersects(&self) -> bool {
        let n = self.points.len() - 1;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_cross(self.points[i], self.points[i + 1], self.points[j], self.points[j + 1]) {
                    return true;
                }
            }
        }
        false
    }

    /// One-pixel outline, cropped to its bounding box.
    pub fn rasterize(&self) -> BitMask {
        let mut m = BitMask::empty(self.size, self.size);
        for seg in self.points.windows(2) {
            let (x0, y0) = (libm::round(seg[0].0) as isize, libm::round(seg[0].1) as isize);
            let (x1, y1) = (libm::round(seg[1].0) as isize, libm::round(seg[1].1) as isize);
            draw_line(&mut m, x0, y0, x1, y1);
        }
        m.cropped()
    }
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn segments_cross(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Bresenham; points outside the mask are dropped.
pub(crate) fn draw_line(m: &mut BitMask, mut x0: isize, mut y0: isize, x1: isize, y1: isize) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if x0 >= 0 && y0 >= 0 && (x0 as usize) < m.width() && (y0 as usize) < m.height() {
            m.set(x0 as usize, y0 as usize);
        }
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Random radial-Fourier outline; resamples until the polyline is simple.
pub fn random_closed_shape(seed: u64, size: usize) -> Result<ShapeContour> {
    if !(MIN_SHAPE_SIZE..=MAX_SHAPE_SIZE).contains(&size) {
        return Err(invalid(alloc::format!(
            "shape size {size} outside [{MIN_SHAPE_SIZE}, {MAX_SHAPE_SIZE}]"
        )));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..MAX_SHAPE_ATTEMPTS {
        let harmonics: Vec<(usize, f64, f64)> = HARMONICS
            .map(|k| (k, rng.gen_range(-MAX_AMPLITUDE..=MAX_AMPLITUDE), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let shape = ShapeContour::from_harmonics(size, &harmonics, seed)?;
        if shape.min_radius_factor() < MIN_RADIUS_FACTOR || shape.self_intersects() {
            continue;
        }
        return Ok(shape);
    }
    Err(Error::Generation(alloc::format!("no simple contour for seed {seed}")))
}
