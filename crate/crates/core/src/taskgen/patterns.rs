//! Non-task test images: periodic bars and gaze-style odd-one-out grids.

use alloc::vec::Vec;

use rand::Rng;

use super::mask::BitMask;
use super::scene::{interior, place_boxes, render, stamp, PlacedFigure, Rect, BACKGROUND, STROKE};
use super::tasks::{TaskKind, DISTINCT_THRESHOLD, FIGURE_SIZES};
use super::shape::random_closed_shape;
use crate::error::{invalid, Error, Result};
use crate::grid::GrayImage;
use crate::rng::{derive_seed, rng_from_seed};
use crate::IMAGE_SIZE;

pub const MIN_BAR_PERIOD: usize = 2;
pub const MAX_BAR_PERIOD: usize = 48;

#[derive(Debug, Clone, PartialEq)]
pub struct BarsImage {
    pub image: GrayImage,
    pub period: usize,
    pub bar_width: usize,
    /// Unique figures drawn over the stripes (empty without shapes).
    pub figures: Vec<PlacedFigure>,
}

impl BarsImage {
    pub fn is_bar_column(&self, x: usize) -> bool {
        x % self.period < self.bar_width
    }
}

fn random_masks(rng: &mut crate::rng::SampleRng, count: usize, size: usize) -> Result<Vec<BitMask>> {
    let mut masks: Vec<BitMask> = Vec::new();
    for _ in 0..100 * count {
        if masks.len() == count {
            break;
        }
        let m = random_closed_shape(rng.gen(), size)?.rasterize();
        if masks.iter().all(|o| o.is_distinct_from(&m, DISTINCT_THRESHOLD)) {
            masks.push(m);
        }
    }
    if masks.len() != count {
        return Err(Error::Generation(alloc::format!("could not draw {count} distinct shapes")));
    }
    Ok(masks)
}

/// Vertical stripes of the given period (bar width `max(1, period / 4)`),
/// optionally with two or three unique figures on top.
pub fn gen_bars(seed: u64, period: usize, with_unique_shapes: bool) -> Result<BarsImage> {
    if !(MIN_BAR_PERIOD..=MAX_BAR_PERIOD).contains(&period) {
        return Err(invalid(alloc::format!(
            "bar period {period} outside [{MIN_BAR_PERIOD}, {MAX_BAR_PERIOD}]"
        )));
    }
    let bar_width = (period / 4).max(1);
    let mut image = GrayImage::filled(IMAGE_SIZE, IMAGE_SIZE, BACKGROUND)?;
    for y in 0..IMAGE_SIZE {
        for x in 0..IMAGE_SIZE {
            if x % period < bar_width {
                image.set(x, y, STROKE);
            }
        }
    }
    let mut figures = Vec::new();
    if with_unique_shapes {
        let mut rng = rng_from_seed(seed);
        let count = rng.gen_range(2..=3);
        let mut placed = None;
        for _ in 0..200 {
            let size = rng.gen_range(FIGURE_SIZES);
            let masks = random_masks(&mut rng, count, size)?;
            let dims: Vec<(usize, usize)> = masks.iter().map(|m| (m.width(), m.height())).collect();
            if let Some(rects) = place_boxes(&mut rng, &dims, interior(), &[]) {
                placed = Some(
                    masks
                        .into_iter()
                        .zip(rects)
                        .enumerate()
                        .map(|(i, (mask, r))| PlacedFigure { shape: i, mask, x: r.x, y: r.y })
                        .collect::<Vec<_>>(),
                );
                break;
            }
        }
        figures = placed.ok_or_else(|| Error::Generation("bars figures could not be placed".into()))?;
        stamp(&mut image, &figures);
    }
    Ok(BarsImage {
        image,
        period,
        bar_width,
        figures,
    })
}

/// An image with several copies of one figure plus one unique figure.
#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessProbe {
    pub image: GrayImage,
    /// Shape 0 is the repeated figure, shape 1 the unique one.
    pub figures: Vec<PlacedFigure>,
}

/// Four identical figures (a class-1 four-copies sample) with one extra
/// unique figure of the same size.
pub fn gen_uniqueness_probe(seed: u64, copies: usize) -> Result<UniquenessProbe> {
    if copies < 2 {
        return Err(invalid("a probe needs at least two copies"));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..200 {
        let size = rng.gen_range(FIGURE_SIZES);
        let masks = random_masks(&mut rng, 2, size)?;
        let mut dims = alloc::vec![(masks[0].width(), masks[0].height()); copies];
        dims.push((masks[1].width(), masks[1].height()));
        if let Some(rects) = place_boxes(&mut rng, &dims, interior(), &[]) {
            let figures: Vec<PlacedFigure> = rects
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let shape = usize::from(i == copies);
                    PlacedFigure {
                        shape,
                        mask: masks[shape].clone(),
                        x: r.x,
                        y: r.y,
                    }
                })
                .collect();
            return Ok(UniquenessProbe {
                image: render(&figures),
                figures,
            });
        }
    }
    Err(Error::Generation(alloc::format!("probe {seed} could not be placed")))
}

/// Odd-one-out grid and the bounding box of the odd element.
#[derive(Debug, Clone, PartialEq)]
pub struct GazePattern {
    pub image: GrayImage,
    pub target: Rect,
    /// Bounding boxes of every element, odd one included.
    pub elements: Vec<Rect>,
}

/// Grid cells per side and the odd cell.
const GAZE_CELLS: usize = 6;
const GAZE_ODD_CELL: (usize, usize) = (4, 1);
const GAZE_CELL: usize = IMAGE_SIZE / GAZE_CELLS;
const DISC_RADIUS: f64 = 4.5;
const ODD_DISC_INTENSITY: f64 = 0.6;
const BAR_LONG: usize = 11;
const BAR_SHORT: usize = 2;
const RING_RADIUS: f64 = 5.5;
const RING_HALF_WIDTH: f64 = 0.75;
/// Half-angle of the missing arc in the odd ring (radians).
const RING_GAP: f64 = 0.6;

fn draw_element(img: &mut GrayImage, kind: TaskKind, cx: usize, cy: usize, odd: bool) -> Rect {
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    let mut paint = |img: &mut GrayImage, x: usize, y: usize, v: f64| {
        img.set(x, y, v);
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    };
    let half = GAZE_CELL / 2;
    for y in cy - half..cy + half {
        for x in cx - half..cx + half {
            let dx = x as f64 - (cx as f64 - 0.5);
            let dy = y as f64 - (cy as f64 - 0.5);
            match kind {
                TaskKind::GazeIntensity => {
                    if dx * dx + dy * dy <= DISC_RADIUS * DISC_RADIUS {
                        paint(img, x, y, if odd { ODD_DISC_INTENSITY } else { STROKE });
                    }
                }
                TaskKind::GazeOrientation => {
                    let (along, across) = if odd { (dy, dx) } else { (dx, dy) };
                    if along.abs() <= BAR_LONG as f64 / 2.0 && across.abs() <= BAR_SHORT as f64 / 2.0 {
                        paint(img, x, y, STROKE);
                    }
                }
                _ => {
                    let r = libm::hypot(dx, dy);
                    let in_gap = odd && libm::atan2(dy, dx).abs() < RING_GAP;
                    if (r - RING_RADIUS).abs() <= RING_HALF_WIDTH && !in_gap {
                        paint(img, x, y, STROKE);
                    }
                }
            }
        }
    }
    Rect {
        x: x0,
        y: y0,
        w: x1 - x0 + 1,
        h: y1 - y0 + 1,
    }
}

/// Deterministic 6x6 grid of identical elements with one odd element.
pub fn gen_gaze_pattern(kind: TaskKind) -> Result<GazePattern> {
    if !TaskKind::GAZE.contains(&kind) {
        return Err(invalid(alloc::format!("{kind} is not a gaze pattern")));
    }
    let mut image = GrayImage::filled(IMAGE_SIZE, IMAGE_SIZE, BACKGROUND)?;
    let mut elements = Vec::new();
    let mut target = None;
    for gy in 0..GAZE_CELLS {
        for gx in 0..GAZE_CELLS {
            let odd = (gx, gy) == GAZE_ODD_CELL;
            let cx = gx * GAZE_CELL + GAZE_CELL / 2;
            let cy = gy * GAZE_CELL + GAZE_CELL / 2;
            let rect = draw_element(&mut image, kind, cx, cy, odd);
            if odd {
                target = Some(rect);
            }
            elements.push(rect);
        }
    }
    Ok(GazePattern {
        image,
        target: target.expect("odd cell inside grid"),
        elements,
    })
}

/// Seed for the `index`-th bars image of a batch.
pub fn bars_seed(seed: u64, index: u64) -> u64 {
    derive_seed(seed, index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_range() {
        assert!(gen_bars(0, 1, false).is_err());
        assert!(gen_bars(0, 49, false).is_err());
        assert!(gen_bars(0, 2, false).is_ok());
        assert!(gen_bars(0, 48, true).is_ok());
    }

    #[test]
    fn bars_deterministic() {
        assert_eq!(gen_bars(5, 8, true).unwrap(), gen_bars(5, 8, true).unwrap());
        let b = gen_bars(5, 8, true).unwrap();
        assert!((2..=3).contains(&b.figures.len()));
    }

    #[test]
    fn gaze_rejects_sd_kind() {
        assert!(gen_gaze_pattern(TaskKind::Sd1).is_err());
    }

    #[test]
    fn probe_layout() {
        let p = gen_uniqueness_probe(3, 4).unwrap();
        assert_eq!(p.figures.len(), 5);
        assert_eq!(p.figures.iter().filter(|f| f.shape == 0).count(), 4);
        assert!(p.figures[0].mask.is_distinct_from(&p.figures[4].mask, DISTINCT_THRESHOLD));
    }
}
