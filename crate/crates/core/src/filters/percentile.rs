use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::spectrum::AmplitudeSpectrum;

/// Window percentile `p` (percent) over a `w x w` neighborhood, `w` odd.
///
/// `wf = w / width` is derived from the bound spectrum width, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercentileFilterSpec {
    p: f64,
    w: usize,
}

impl PercentileFilterSpec {
    pub fn new(p: f64, w: usize) -> Result<Self> {
        if !(p > 0.0 && p <= 100.0) {
            return Err(invalid(alloc::format!("percentile must lie in (0, 100], got {p}")));
        }
        if w == 0 || w.is_multiple_of(2) {
            return Err(invalid(alloc::format!("window side must be odd and positive, got {w}")));
        }
        Ok(Self { p, w })
    }

    /// `w = round(wf * width)`, stepped down to the nearest odd value (min 1).
    pub fn from_fraction(p: f64, wf: f64, width: usize) -> Result<Self> {
        if !(wf > 0.0 && wf.is_finite()) {
            return Err(invalid(alloc::format!("window fraction must be positive, got {wf}")));
        }
        let mut w = libm::round(wf * width as f64) as usize;
        if w.is_multiple_of(2) {
            w = w.saturating_sub(1);
        }
        Self::new(p, w.max(1))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn wf(&self, width: usize) -> f64 {
        self.w as f64 / width as f64
    }

    /// 1-based order statistic `ceil(p * w² / 100)` selected in each window.
    pub fn rank(&self) -> usize {
        let n = self.w * self.w;
        let k = libm::ceil(self.p * n as f64 / 100.0) as usize;
        k.clamp(1, n)
    }

    fn check_fits(&self, width: usize, height: usize) -> Result<()> {
        let limit = 2 * width.max(height) - 1;
        if self.w > limit {
            return Err(invalid(alloc::format!(
                "window {} exceeds {limit} for a {width}x{height} field",
                self.w
            )));
        }
        Ok(())
    }
}

#[inline]
fn cmp(a: &f64, b: &f64) -> Ordering {
    a.total_cmp(b)
}

/// Reference implementation: materialize each window (padding with zeros),
/// sort, and pick the `rank()`-th smallest.
pub fn percentile_filter_naive(amp: &AmplitudeSpectrum, spec: &PercentileFilterSpec) -> Result<AmplitudeSpectrum> {
    let grid = amp.grid();
    let (w, h) = grid.dims();
    spec.check_fits(w, h)?;
    let r = (spec.w / 2) as isize;
    let k = spec.rank();
    let mut window = Vec::with_capacity(spec.w * spec.w);
    let out = Grid::from_fn(w, h, |x, y| {
        window.clear();
        for dy in -r..=r {
            for dx in -r..=r {
                let (sx, sy) = (x as isize + dx, y as isize + dy);
                if sx < 0 || sy < 0 || sx >= w as isize || sy >= h as isize {
                    window.push(0.0);
                } else {
                    window.push(*grid.get(sx as usize, sy as usize));
                }
            }
        }
        window.sort_by(cmp);
        window[k - 1]
    })?;
    Ok(AmplitudeSpectrum::from_grid_unchecked(out))
}

/// Counts over value ranks, split into coarse blocks for sublinear queries.
struct RankHistogram {
    fine: Vec<u32>,
    coarse: Vec<u32>,
    block: usize,
}

impl RankHistogram {
    fn new(slots: usize) -> Self {
        let mut block = 1;
        while block * block < slots {
            block += 1;
        }
        Self {
            fine: vec![0; slots],
            coarse: vec![0; slots.div_ceil(block)],
            block,
        }
    }

    fn clear(&mut self) {
        self.fine.fill(0);
        self.coarse.fill(0);
    }

    #[inline]
    fn add(&mut self, slot: usize, count: u32) {
        self.fine[slot] += count;
        self.coarse[slot / self.block] += count;
    }

    #[inline]
    fn remove(&mut self, slot: usize, count: u32) {
        self.fine[slot] -= count;
        self.coarse[slot / self.block] -= count;
    }

    /// Slot holding the `k`-th smallest element (1-based) of a multiset
    /// with `total` members.
    fn select(&self, k: u32, total: u32) -> usize {
        if 2 * k <= total {
            let mut seen = 0;
            for (b, &c) in self.coarse.iter().enumerate() {
                if seen + c >= k {
                    let start = b * self.block;
                    for (i, &f) in self.fine[start..].iter().enumerate() {
                        seen += f;
                        if seen >= k {
                            return start + i;
                        }
                    }
                }
                seen += c;
            }
        } else {
            // Walk from the top: the k-th smallest is the (total-k+1)-th largest.
            let k = total - k + 1;
            let mut seen = 0;
            for (b, &c) in self.coarse.iter().enumerate().rev() {
                if seen + c >= k {
                    let start = b * self.block;
                    let end = (start + self.block).min(self.fine.len());
                    for i in (start..end).rev() {
                        seen += self.fine[i];
                        if seen >= k {
                            return i;
                        }
                    }
                }
                seen += c;
            }
        }
        unreachable!("rank {k} beyond histogram total {total}")
    }
}

/// Sliding-window percentile filter, bit-identical to
/// [`percentile_filter_naive`].
///
/// All values plus one padding zero are sorted once, so each window becomes
/// a histogram over ranks. Moving along a row adds and removes one column
/// (`O(w)`) and a query walks `O(sqrt(n))` blocks; the selected rank maps
/// back to the exact input value.
pub fn percentile_filter_fast(amp: &AmplitudeSpectrum, spec: &PercentileFilterSpec) -> Result<AmplitudeSpectrum> {
    let grid = amp.grid();
    let (w, h) = grid.dims();
    spec.check_fits(w, h)?;
    let n = w * h;
    let r = spec.w / 2;
    let k = spec.rank() as u32;
    let total = (spec.w * spec.w) as u32;

    // Index n stands for the padding zero.
    let mut order: Vec<u32> = (0..=n as u32).collect();
    let value_of = |i: u32| if i as usize == n { 0.0 } else { grid.data()[i as usize] };
    order.sort_unstable_by(|&a, &b| cmp(&value_of(a), &value_of(b)).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| value_of(i)).collect();
    let mut rank_of = vec![0usize; n + 1];
    for (slot, &i) in order.iter().enumerate() {
        rank_of[i as usize] = slot;
    }
    let pad_slot = rank_of[n];
    let ranks = &rank_of[..n];

    let mut hist = RankHistogram::new(n + 1);
    let mut out = vec![0.0; n];
    for y in 0..h {
        let y0 = y.saturating_sub(r);
        let y1 = (y + r).min(h - 1);
        let rows_in = (y1 - y0 + 1) as u32;
        hist.clear();
        let x1 = r.min(w - 1);
        for yy in y0..=y1 {
            for xx in 0..=x1 {
                hist.add(ranks[yy * w + xx], 1);
            }
        }
        let mut pads = 0;
        for x in 0..w {
            if x > 0 {
                if x > r {
                    let gone = x - r - 1;
                    for yy in y0..=y1 {
                        hist.remove(ranks[yy * w + gone], 1);
                    }
                }
                let new = x + r;
                if new < w {
                    for yy in y0..=y1 {
                        hist.add(ranks[yy * w + new], 1);
                    }
                }
            }
            let cols_in = ((x + r).min(w - 1) - x.saturating_sub(r) + 1) as u32;
            let want_pads = total - rows_in * cols_in;
            if want_pads != pads {
                if pads > 0 {
                    hist.remove(pad_slot, pads);
                }
                if want_pads > 0 {
                    hist.add(pad_slot, want_pads);
                }
                pads = want_pads;
            }
            out[y * w + x] = sorted[hist.select(k, total)];
        }
        if pads > 0 {
            hist.remove(pad_slot, pads);
        }
    }
    Ok(AmplitudeSpectrum::from_grid_unchecked(Grid::new(w, h, out)?))
}

/// The production percentile filter (the sliding-window path).
pub fn percentile_filter(amp: &AmplitudeSpectrum, spec: &PercentileFilterSpec) -> Result<AmplitudeSpectrum> {
    percentile_filter_fast(amp, spec)
}
