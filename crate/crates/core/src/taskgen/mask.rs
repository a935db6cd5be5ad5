use alloc::vec::Vec;

/// Binary figure mask, at most 64 pixels wide. Bit `x` of `rows[y]` is
/// pixel `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMask {
    width: usize,
    height: usize,
    rows: Vec<u64>,
}

impl BitMask {
    pub const MAX_WIDTH: usize = 64;

    pub fn empty(width: usize, height: usize) -> Self {
        assert!(width <= Self::MAX_WIDTH, "mask wider than 64 pixels");
        Self {
            width,
            height,
            rows: alloc::vec![0; height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::empty(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    m.set(x, y);
                }
            }
        }
        m
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height && (self.rows[y] >> x) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize) {
        self.rows[y] |= 1 << x;
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Shrinks to the tight bounding box of the set pixels.
    pub fn cropped(&self) -> BitMask {
        let ys: Vec<usize> = (0..self.height).filter(|&y| self.rows[y] != 0).collect();
        let (Some(&y0), Some(&y1)) = (ys.first(), ys.last()) else {
            return BitMask::empty(0, 0);
        };
        let any = self.rows.iter().fold(0u64, |a, r| a | r);
        let x0 = any.trailing_zeros() as usize;
        let x1 = 63 - any.leading_zeros() as usize;
        BitMask::from_fn(x1 - x0 + 1, y1 - y0 + 1, |x, y| self.get(x + x0, y + y0))
    }

    pub fn flipped_horizontal(&self) -> BitMask {
        BitMask::from_fn(self.width, self.height, |x, y| self.get(self.width - 1 - x, y))
    }

    pub fn pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).filter(move |&x| self.get(x, y)).map(move |x| (x, y)))
    }

    /// Set pixels shared with `other` placed at offset `(dx, dy)`.
    fn overlap_at(&self, other: &BitMask, dx: isize, dy: isize) -> usize {
        let mut total = 0;
        for y in 0..self.height {
            let oy = y as isize - dy;
            if oy < 0 || oy >= other.height as isize {
                continue;
            }
            let row = other.rows[oy as usize];
            let shifted = if dx >= 0 { row << dx } else { row >> (-dx) };
            total += (self.rows[y] & shifted).count_ones() as usize;
        }
        total
    }

    /// Smallest symmetric difference between `self` and any translate of
    /// `other`, as a fraction of their combined stroke pixels. Zero means the
    /// masks are identical up to translation.
    pub fn alignment_difference(&self, other: &BitMask) -> f64 {
        let total = self.count() + other.count();
        if total == 0 {
            return 0.0;
        }
        let mut best = 0;
        for dy in -(other.height as isize - 1)..self.height as isize {
            for dx in -(other.width as isize - 1)..self.width as isize {
                best = best.max(self.overlap_at(other, dx, dy));
            }
        }
        (total - 2 * best) as f64 / total as f64
    }

    pub fn same_up_to_translation(&self, other: &BitMask) -> bool {
        self.count() == other.count() && self.alignment_difference(other) == 0.0
    }

    /// `true` when the masks differ in at least `threshold` of their stroke
    /// pixels under every translation. The stroke-count gap is a lower
    /// bound that usually settles it without a search.
    pub fn is_distinct_from(&self, other: &BitMask, threshold: f64) -> bool {
        let (a, b) = (self.count() as f64, other.count() as f64);
        if a + b > 0.0 && (a - b).abs() / (a + b) >= threshold {
            return true;
        }
        self.alignment_difference(other) >= threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell() -> BitMask {
        BitMask::from_fn(4, 5, |x, y| x == 0 || y == 4)
    }

    #[test]
    fn translation_invariant_difference() {
        let a = ell();
        let mut padded = BitMask::empty(10, 9);
        for (x, y) in a.pixels() {
            padded.set(x + 3, y + 2);
        }
        assert!(a.same_up_to_translation(&padded));
        assert!(a.same_up_to_translation(&padded.cropped()));
        assert_eq!(padded.cropped(), a);
    }

    #[test]
    fn mirror_differs() {
        let a = ell();
        let f = a.flipped_horizontal();
        assert!(!a.same_up_to_translation(&f));
        assert!(a.is_distinct_from(&f, 0.05));
        assert_eq!(f.flipped_horizontal(), a);
    }

    #[test]
    fn difference_of_disjoint_sizes() {
        let dot = BitMask::from_fn(1, 1, |_, _| true);
        let bar = BitMask::from_fn(3, 1, |_, _| true);
        // Best overlap is one pixel: (1 + 3 - 2) / 4.
        assert_eq!(dot.alignment_difference(&bar), 0.5);
    }
}
