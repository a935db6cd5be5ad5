//! Exact 1D FFT for arbitrary lengths.
//!
//! Lengths are factored into radices 4, 2, 3, 5, ... and transformed by
//! recursive decimation in time. Prime factors above [`DIRECT_RADIX_LIMIT`]
//! go through Bluestein's chirp-z convolution on a power-of-two FFT, so no
//! length degrades to O(n²).

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

const DIRECT_RADIX_LIMIT: usize = 32;

/// A planned forward transform of fixed length.
#[derive(Debug, Clone)]
pub struct Fft1d {
    n: usize,
    factors: Vec<usize>,
    /// `exp(-2πi j / n)` for `j < n`.
    twiddles: Vec<Complex64>,
    bluestein: Vec<(usize, Box<Bluestein>)>,
    max_radix: usize,
}

impl Fft1d {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "FFT length must be positive");
        let factors = factorize(n);
        let twiddles = (0..n).map(|j| unit_root(j, n)).collect();
        let mut bluestein: Vec<(usize, Box<Bluestein>)> = Vec::new();
        for &r in &factors {
            if r > DIRECT_RADIX_LIMIT && !bluestein.iter().any(|(len, _)| *len == r) {
                bluestein.push((r, Box::new(Bluestein::new(r))));
            }
        }
        let max_radix = factors.iter().copied().max().unwrap_or(1);
        Self {
            n,
            factors,
            twiddles,
            bluestein,
            max_radix,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Unnormalized forward DFT: `out[k] = Σ_j input[j] exp(-2πi jk/n)`.
    pub fn forward(&self, input: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(input.len(), self.n);
        assert_eq!(out.len(), self.n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); 2 * self.max_radix];
        self.recurse(input, 0, 1, out, 0, &mut scratch);
    }

    /// Unnormalized inverse DFT (positive exponent, no `1/n`).
    pub fn inverse(&self, input: &[Complex64], out: &mut [Complex64]) {
        let conj: Vec<Complex64> = input.iter().map(|z| z.conj()).collect();
        self.forward(&conj, out);
        for z in out.iter_mut() {
            *z = z.conj();
        }
    }

    fn recurse(
        &self,
        input: &[Complex64],
        offset: usize,
        stride: usize,
        out: &mut [Complex64],
        level: usize,
        scratch: &mut [Complex64],
    ) {
        let len = out.len();
        if len == 1 {
            out[0] = input[offset];
            return;
        }
        let radix = self.factors[level];
        let sub = len / radix;
        for q in 0..radix {
            self.recurse(
                input,
                offset + q * stride,
                stride * radix,
                &mut out[q * sub..(q + 1) * sub],
                level + 1,
                scratch,
            );
        }

        let tw_step = self.n / len;
        let root_step = self.n / radix;
        let (terms, sums) = scratch.split_at_mut(self.max_radix);
        for k in 0..sub {
            for q in 0..radix {
                let tw = self.twiddles[(q * k * tw_step) % self.n];
                terms[q] = out[q * sub + k] * tw;
            }
            match radix {
                2 => {
                    sums[0] = terms[0] + terms[1];
                    sums[1] = terms[0] - terms[1];
                }
                4 => {
                    let a = terms[0] + terms[2];
                    let b = terms[0] - terms[2];
                    let c = terms[1] + terms[3];
                    // -i * (t1 - t3)
                    let d = terms[1] - terms[3];
                    let d = Complex64::new(d.im, -d.re);
                    sums[0] = a + c;
                    sums[1] = b + d;
                    sums[2] = a - c;
                    sums[3] = b - d;
                }
                r if r <= DIRECT_RADIX_LIMIT => {
                    for s in 0..r {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for q in 0..r {
                            acc += terms[q] * self.twiddles[((q * s) % r) * root_step];
                        }
                        sums[s] = acc;
                    }
                }
                r => {
                    let plan = self
                        .bluestein
                        .iter()
                        .find(|(len, _)| *len == r)
                        .map(|(_, p)| p)
                        .expect("bluestein plan for large radix");
                    plan.transform(&terms[..r], &mut sums[..r]);
                }
            }
            for s in 0..radix {
                out[s * sub + k] = sums[s];
            }
        }
    }
}

fn unit_root(j: usize, n: usize) -> Complex64 {
    let angle = -2.0 * PI * (j as f64) / (n as f64);
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

fn factorize(mut n: usize) -> Vec<usize> {
    let mut factors = Vec::new();
    while n.is_multiple_of(4) {
        factors.push(4);
        n /= 4;
    }
    while n.is_multiple_of(2) {
        factors.push(2);
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        while n.is_multiple_of(p) {
            factors.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// Chirp-z evaluation of a prime-length DFT through a power-of-two convolution.
#[derive(Debug, Clone)]
struct Bluestein {
    n: usize,
    chirp: Vec<Complex64>,
    kernel_spectrum: Vec<Complex64>,
    inner: Fft1d,
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let chirp: Vec<Complex64> = (0..n)
            .map(|j| {
                // j² mod 2n keeps the angle small for accuracy.
                let e = (j * j) % (2 * n);
                let angle = -PI * (e as f64) / (n as f64);
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for j in 1..n {
            kernel[j] = chirp[j].conj();
            kernel[m - j] = chirp[j].conj();
        }
        let inner = Fft1d::new(m);
        let mut kernel_spectrum = vec![Complex64::new(0.0, 0.0); m];
        inner.forward(&kernel, &mut kernel_spectrum);
        Self {
            n,
            chirp,
            kernel_spectrum,
            inner,
        }
    }

    fn transform(&self, input: &[Complex64], out: &mut [Complex64]) {
        let m = self.kernel_spectrum.len();
        let mut a = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..self.n {
            a[j] = input[j] * self.chirp[j];
        }
        let mut fa = vec![Complex64::new(0.0, 0.0); m];
        self.inner.forward(&a, &mut fa);
        for (x, k) in fa.iter_mut().zip(&self.kernel_spectrum) {
            *x *= k;
        }
        self.inner.inverse(&fa, &mut a);
        let scale = 1.0 / m as f64;
        for s in 0..self.n {
            out[s] = a[s] * scale * self.chirp[s];
        }
    }
}
