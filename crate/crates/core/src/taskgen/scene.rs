use alloc::vec::Vec;

use rand::Rng;

use super::mask::BitMask;
use crate::grid::GrayImage;
use crate::rng::SampleRng;
use crate::IMAGE_SIZE;

/// Pixels of clearance kept from the image edge.
pub const BORDER: usize = 2;
/// Minimum gap between figure bounding boxes.
pub const SEPARATION: usize = 2;
pub const PLACEMENT_TRIES: usize = 1000;

pub const BACKGROUND: f64 = 1.0;
pub const STROKE: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && y >= self.y && x < self.x + self.w && y < self.y + self.h
    }

    /// `true` when the boxes keep at least `gap` empty pixels between them.
    pub fn separated(&self, other: &Rect, gap: usize) -> bool {
        self.x + self.w + gap <= other.x
            || other.x + other.w + gap <= self.x
            || self.y + self.h + gap <= other.y
            || other.y + other.h + gap <= self.y
    }

    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + (self.w as f64 - 1.0) / 2.0,
            self.y as f64 + (self.h as f64 - 1.0) / 2.0,
        )
    }
}

/// A figure mask stamped at `(x, y)`. Figures sharing `shape` are
/// translated copies of one mask.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedFigure {
    pub shape: usize,
    pub mask: BitMask,
    pub x: usize,
    pub y: usize,
}

impl PlacedFigure {
    pub fn bounds(&self) -> Rect {
        Rect {
            x: self.x,
            y: self.y,
            w: self.mask.width(),
            h: self.mask.height(),
        }
    }

    pub fn pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mask.pixels().map(move |(x, y)| (x + self.x, y + self.y))
    }
}

/// White canvas with black strokes for every figure.
pub fn render(figures: &[PlacedFigure]) -> GrayImage {
    let mut img = GrayImage::filled(IMAGE_SIZE, IMAGE_SIZE, BACKGROUND).expect("fixed dims");
    stamp(&mut img, figures);
    img
}

pub fn stamp(img: &mut GrayImage, figures: &[PlacedFigure]) {
    for fig in figures {
        for (x, y) in fig.pixels() {
            img.set(x, y, STROKE);
        }
    }
}

/// Allowed top-left coordinates for a box of the given dims inside
/// `[lo, hi)` on one axis.
fn axis_range(lo: usize, hi: usize, extent: usize) -> Option<(usize, usize)> {
    if lo + extent > hi {
        return None;
    }
    Some((lo, hi - extent))
}

/// Picks positions one figure at a time inside `region`, rejecting boxes
/// that crowd a previously placed one. Returns `None` after
/// [`PLACEMENT_TRIES`] failures for any single figure.
pub fn place_boxes(rng: &mut SampleRng, dims: &[(usize, usize)], region: Rect, taken: &[Rect]) -> Option<Vec<Rect>> {
    let mut placed: Vec<Rect> = Vec::with_capacity(dims.len());
    for &(w, h) in dims {
        let (x0, x1) = axis_range(region.x, region.x + region.w, w)?;
        let (y0, y1) = axis_range(region.y, region.y + region.h, h)?;
        let mut ok = None;
        for _ in 0..PLACEMENT_TRIES {
            let r = Rect {
                x: rng.gen_range(x0..=x1),
                y: rng.gen_range(y0..=y1),
                w,
                h,
            };
            if placed.iter().chain(taken).all(|p| p.separated(&r, SEPARATION)) {
                ok = Some(r);
                break;
            }
        }
        placed.push(ok?);
    }
    Some(placed)
}

/// The full image minus the border margin.
pub fn interior() -> Rect {
    Rect {
        x: BORDER,
        y: BORDER,
        w: IMAGE_SIZE - 2 * BORDER,
        h: IMAGE_SIZE - 2 * BORDER,
    }
}

pub fn inside_interior(r: &Rect) -> bool {
    let i = interior();
    r.x >= i.x && r.y >= i.y && r.x + r.w <= i.x + i.w && r.y + r.h <= i.y + i.h
}

/// 8-connected components of stroke pixels (value below 0.5), in raster
/// order of their first pixel. Components wider than a mask allows are
/// skipped.
pub fn figures_from_image(img: &GrayImage) -> Vec<PlacedFigure> {
    let (w, h) = (img.width(), img.height());
    let mut seen = alloc::vec![false; w * h];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if seen[start] || img.data()[start] >= 0.5 {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut pix = Vec::new();
        while let Some(i) = stack.pop() {
            let (x, y) = (i % w, i / w);
            pix.push((x, y));
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if !seen[j] && img.data()[j] < 0.5 {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        let x0 = pix.iter().map(|p| p.0).min().unwrap_or(0);
        let x1 = pix.iter().map(|p| p.0).max().unwrap_or(0);
        let y0 = pix.iter().map(|p| p.1).min().unwrap_or(0);
        let y1 = pix.iter().map(|p| p.1).max().unwrap_or(0);
        if x1 - x0 + 1 > BitMask::MAX_WIDTH {
            continue;
        }
        let mut mask = BitMask::empty(x1 - x0 + 1, y1 - y0 + 1);
        for (x, y) in pix {
            mask.set(x - x0, y - y0);
        }
        out.push(PlacedFigure {
            shape: out.len(),
            mask,
            x: x0,
            y: y0,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn separation_rule() {
        let a = Rect { x: 0, y: 0, w: 4, h: 4 };
        assert!(a.separated(&Rect { x: 6, y: 0, w: 2, h: 2 }, 2));
        assert!(!a.separated(&Rect { x: 5, y: 0, w: 2, h: 2 }, 2));
        assert!(a.separated(&Rect { x: 0, y: 6, w: 2, h: 2 }, 2));
    }

    #[test]
    fn placement_respects_region() {
        let mut rng = rng_from_seed(3);
        let dims = [(10, 12), (20, 8), (5, 5)];
        let placed = place_boxes(&mut rng, &dims, interior(), &[]).unwrap();
        for (i, r) in placed.iter().enumerate() {
            assert!(inside_interior(r));
            for other in &placed[i + 1..] {
                assert!(r.separated(other, SEPARATION));
            }
        }
        let big = [(93, 10)];
        assert!(place_boxes(&mut rng, &big, interior(), &[]).is_none());
    }
}
