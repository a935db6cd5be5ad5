use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use super::mask::BitMask;
use super::scene::{inside_interior, interior, place_boxes, render, PlacedFigure, Rect, BORDER, SEPARATION};
use super::shape::random_closed_shape;
use crate::error::{invalid, Error, Result};
use crate::grid::GrayImage;
use crate::rng::{derive_seed, rng_from_seed, SampleRng};
use crate::IMAGE_SIZE;

/// Figure sizes are drawn uniformly from this range (pixels).
pub const FIGURE_SIZES: core::ops::RangeInclusive<usize> = 12..=32;
/// Distinct figures differ in at least this fraction of stroke pixels
/// under every translation.
pub const DISTINCT_THRESHOLD: f64 = 0.05;
const SAMPLE_ATTEMPTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskKind {
    Sd1,
    Sd5,
    Sd15,
    Sd16,
    Sd22,
    Bars,
    GazeIntensity,
    GazeOrientation,
    GazeClosure,
}

impl TaskKind {
    pub const SAME_DIFFERENT: [TaskKind; 5] =
        [TaskKind::Sd1, TaskKind::Sd5, TaskKind::Sd15, TaskKind::Sd16, TaskKind::Sd22];
    pub const GAZE: [TaskKind; 3] = [TaskKind::GazeIntensity, TaskKind::GazeOrientation, TaskKind::GazeClosure];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Sd1 => "SD1",
            TaskKind::Sd5 => "SD5",
            TaskKind::Sd15 => "SD15",
            TaskKind::Sd16 => "SD16",
            TaskKind::Sd22 => "SD22",
            TaskKind::Bars => "BARS",
            TaskKind::GazeIntensity => "GAZE_INTENSITY",
            TaskKind::GazeOrientation => "GAZE_ORIENTATION",
            TaskKind::GazeClosure => "GAZE_CLOSURE",
        }
    }

    pub fn is_same_different(self) -> bool {
        Self::SAME_DIFFERENT.contains(&self)
    }

    /// Class-1 / class-2 rule in words.
    pub fn rule(self) -> &'static str {
        match self {
            TaskKind::Sd1 => "class 1: two identical figures; class 2: two different figures",
            TaskKind::Sd5 => "class 1: two pairs of identical figures; class 2: four different figures",
            TaskKind::Sd15 => "class 1: four identical figures; class 2: four different figures",
            TaskKind::Sd16 => {
                "six copies of one figure at mirrored positions; class 1: right side is the mirror image, \
                 class 2: right side is an unmirrored copy"
            }
            TaskKind::Sd22 => "three collinear figures; class 1: identical, class 2: all different",
            TaskKind::Bars => "vertical stripes, optionally with unique figures on top",
            TaskKind::GazeIntensity => "grid of discs, one with a different intensity",
            TaskKind::GazeOrientation => "grid of bars, one rotated by 90 degrees",
            TaskKind::GazeClosure => "grid of closed circles, one with a gap",
        }
    }

    /// Generates `n` labelled samples for a same-different task.
    pub fn generate(self, seed: u64, n: usize) -> Result<Vec<LabeledImage>> {
        match self {
            TaskKind::Sd1 => gen_task1(seed, n),
            TaskKind::Sd5 => gen_task5(seed, n),
            TaskKind::Sd15 => gen_task15(seed, n),
            TaskKind::Sd16 => gen_task16(seed, n),
            TaskKind::Sd22 => gen_task22(seed, n),
            other => Err(invalid(alloc::format!("{other} has no labelled sample generator"))),
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            TaskKind::Sd1,
            TaskKind::Sd5,
            TaskKind::Sd15,
            TaskKind::Sd16,
            TaskKind::Sd22,
            TaskKind::Bars,
            TaskKind::GazeIntensity,
            TaskKind::GazeOrientation,
            TaskKind::GazeClosure,
        ];
        all.into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| invalid(alloc::format!("unknown task kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    One = 1,
    Two = 2,
}

impl Class {
    pub fn value(self) -> u8 {
        self as u8
    }

    pub fn other(self) -> Class {
        match self {
            Class::One => Class::Two,
            Class::Two => Class::One,
        }
    }

    /// Balanced assignment: even indices are class 1.
    pub fn for_index(index: usize) -> Class {
        if index.is_multiple_of(2) {
            Class::One
        } else {
            Class::Two
        }
    }
}

/// One generated task image with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledImage {
    pub image: GrayImage,
    pub label: Class,
    pub task: TaskKind,
    /// Sub-seed this sample was generated from.
    pub seed: u64,
    pub figures: Vec<PlacedFigure>,
}

fn draw_mask(rng: &mut SampleRng, size: usize) -> Result<BitMask> {
    Ok(random_closed_shape(rng.gen(), size)?.rasterize())
}

/// `count` masks that are pairwise distinct under the alignment oracle.
fn distinct_masks(rng: &mut SampleRng, size: usize, count: usize) -> Result<Vec<BitMask>> {
    let mut masks: Vec<BitMask> = Vec::with_capacity(count);
    let mut tries = 0;
    while masks.len() < count {
        tries += 1;
        if tries > 100 * count {
            return Err(Error::Generation(alloc::format!("could not draw {count} distinct shapes")));
        }
        let m = draw_mask(rng, size)?;
        if masks.iter().all(|o| o.is_distinct_from(&m, DISTINCT_THRESHOLD)) {
            masks.push(m);
        }
    }
    Ok(masks)
}

/// Places figures `(shape index into masks)` anywhere in the interior.
fn scatter(rng: &mut SampleRng, masks: &[BitMask], layout: &[usize]) -> Option<Vec<PlacedFigure>> {
    let dims: Vec<(usize, usize)> = layout.iter().map(|&s| (masks[s].width(), masks[s].height())).collect();
    let rects = place_boxes(rng, &dims, interior(), &[])?;
    Some(
        layout
            .iter()
            .zip(rects)
            .map(|(&s, r)| PlacedFigure {
                shape: s,
                mask: masks[s].clone(),
                x: r.x,
                y: r.y,
            })
            .collect(),
    )
}

fn generate_with(
    task: TaskKind,
    seed: u64,
    n: usize,
    mut build: impl FnMut(&mut SampleRng, usize, Class) -> Result<Option<Vec<PlacedFigure>>>,
) -> Result<Vec<LabeledImage>> {
    if n == 0 {
        return Err(invalid("sample count must be at least 1"));
    }
    (0..n)
        .map(|i| {
            let label = Class::for_index(i);
            let sub = derive_seed(seed, i as u64);
            let mut rng = rng_from_seed(sub);
            for _ in 0..SAMPLE_ATTEMPTS {
                let size = rng.gen_range(FIGURE_SIZES);
                if let Some(figures) = build(&mut rng, size, label)? {
                    return Ok(LabeledImage {
                        image: render(&figures),
                        label,
                        task,
                        seed: sub,
                        figures,
                    });
                }
            }
            Err(Error::Generation(alloc::format!("{task} sample {i} could not be placed")))
        })
        .collect()
}

/// Class 1: one figure duplicated by translation. Class 2: two different figures.
pub fn gen_task1(seed: u64, n: usize) -> Result<Vec<LabeledImage>> {
    generate_with(TaskKind::Sd1, seed, n, |rng, size, label| {
        Ok(match label {
            Class::One => {
                let masks = distinct_masks(rng, size, 1)?;
                scatter(rng, &masks, &[0, 0])
            }
            Class::Two => {
                let masks = distinct_masks(rng, size, 2)?;
                scatter(rng, &masks, &[0, 1])
            }
        })
    })
}

/// Class 1: two pairs of identical figures. Class 2: four different figures.
pub fn gen_task5(seed: u64, n: usize) -> Result<Vec<LabeledImage>> {
    generate_with(TaskKind::Sd5, seed, n, |rng, size, label| {
        Ok(match label {
            Class::One => {
                let masks = distinct_masks(rng, size, 2)?;
                scatter(rng, &masks, &[0, 0, 1, 1])
            }
            Class::Two => {
                let masks = distinct_masks(rng, size, 4)?;
                scatter(rng, &masks, &[0, 1, 2, 3])
            }
        })
    })
}

/// Class 1: four identical figures. Class 2: four different figures.
pub fn gen_task15(seed: u64, n: usize) -> Result<Vec<LabeledImage>> {
    generate_with(TaskKind::Sd15, seed, n, |rng, size, label| {
        Ok(match label {
            Class::One => {
                let masks = distinct_masks(rng, size, 1)?;
                scatter(rng, &masks, &[0, 0, 0, 0])
            }
            Class::Two => {
                let masks = distinct_masks(rng, size, 4)?;
                scatter(rng, &masks, &[0, 1, 2, 3])
            }
        })
    })
}

/// Mirrored x origin of a box about the vertical bisector.
pub fn mirrored_x(r: &Rect) -> usize {
    IMAGE_SIZE - r.x - r.w
}

/// Six copies of one figure; three on the left, three at mirrored
/// positions on the right. Class 1 mirrors the right-hand masks, class 2
/// copies them unmirrored.
pub fn gen_task16(seed: u64, n: usize) -> Result<Vec<LabeledImage>> {
    generate_with(TaskKind::Sd16, seed, n, |rng, size, label| {
        let mut mask = draw_mask(rng, size)?;
        let mut tries = 0;
        while !mask.is_distinct_from(&mask.flipped_horizontal(), DISTINCT_THRESHOLD) {
            tries += 1;
            if tries > 100 {
                return Ok(None);
            }
            mask = draw_mask(rng, size)?;
        }
        let mirror = mask.flipped_horizontal();
        // Left boxes end at least SEPARATION/2 + 1 pixels before the bisector
        // so mirrored copies keep the full gap.
        let half = IMAGE_SIZE / 2 - SEPARATION / 2;
        let left = Rect {
            x: BORDER,
            y: BORDER,
            w: half - BORDER,
            h: IMAGE_SIZE - 2 * BORDER,
        };
        let dims = [(mask.width(), mask.height()); 3];
        let Some(rects) = place_boxes(rng, &dims, left, &[]) else {
            return Ok(None);
        };
        let right_mask = match label {
            Class::One => mirror,
            Class::Two => mask.clone(),
        };
        let mut figures: Vec<PlacedFigure> = rects
            .iter()
            .map(|r| PlacedFigure {
                shape: 0,
                mask: mask.clone(),
                x: r.x,
                y: r.y,
            })
            .collect();
        figures.extend(rects.iter().map(|r| PlacedFigure {
            shape: if label == Class::One { 1 } else { 0 },
            mask: right_mask.clone(),
            x: mirrored_x(r),
            y: r.y,
        }));
        Ok(Some(figures))
    })
}

/// Three figures with collinear, equally spaced centers. Class 1: one
/// figure three times. Class 2: three different figures.
pub fn gen_task22(seed: u64, n: usize) -> Result<Vec<LabeledImage>> {
    generate_with(TaskKind::Sd22, seed, n, |rng, size, label| {
        let (masks, layout): (Vec<BitMask>, [usize; 3]) = match label {
            Class::One => (distinct_masks(rng, size, 1)?, [0, 0, 0]),
            Class::Two => (distinct_masks(rng, size, 3)?, [0, 1, 2]),
        };
        let mw = masks.iter().map(|m| m.width()).max().unwrap_or(1) as f64;
        let mh = masks.iter().map(|m| m.height()).max().unwrap_or(1) as f64;
        let min_spacing = libm::hypot(mw + SEPARATION as f64, mh + SEPARATION as f64);
        let max_spacing = (IMAGE_SIZE as f64 - 2.0 * BORDER as f64 - mw.max(mh)) / 2.0;
        if min_spacing > max_spacing {
            return Ok(None);
        }
        for _ in 0..super::scene::PLACEMENT_TRIES {
            let theta = rng.gen_range(0.0..PI);
            let spacing = rng.gen_range(min_spacing..=max_spacing);
            let cx = rng.gen_range(0.0..IMAGE_SIZE as f64);
            let cy = rng.gen_range(0.0..IMAGE_SIZE as f64);
            let (dx, dy) = (libm::cos(theta) * spacing, libm::sin(theta) * spacing);
            let mut figures = Vec::with_capacity(3);
            for (j, &s) in layout.iter().enumerate() {
                let t = j as f64 - 1.0;
                let m = &masks[s];
                let x = libm::round(cx + t * dx - (m.width() as f64 - 1.0) / 2.0);
                let y = libm::round(cy + t * dy - (m.height() as f64 - 1.0) / 2.0);
                if x < 0.0 || y < 0.0 {
                    break;
                }
                figures.push(PlacedFigure {
                    shape: s,
                    mask: m.clone(),
                    x: x as usize,
                    y: y as usize,
                });
            }
            if figures.len() != 3 {
                continue;
            }
            let rects: Vec<Rect> = figures.iter().map(|f| f.bounds()).collect();
            let fits = rects.iter().all(inside_interior)
                && (0..3).all(|a| (a + 1..3).all(|b| rects[a].separated(&rects[b], SEPARATION)));
            if fits {
                return Ok(Some(figures));
            }
        }
        Ok(None)
    })
}

/// Re-derives a sample's class from its figure masks alone. `None` means
/// the figures fit neither class rule.
pub fn classify_by_rule(task: TaskKind, figures: &[PlacedFigure]) -> Option<Class> {
    let same = |a: &PlacedFigure, b: &PlacedFigure| a.mask.same_up_to_translation(&b.mask);
    let distinct = |a: &PlacedFigure, b: &PlacedFigure| a.mask.is_distinct_from(&b.mask, DISTINCT_THRESHOLD);
    let all_same = |f: &[PlacedFigure]| f.iter().all(|x| same(&f[0], x));
    let all_distinct = |f: &[PlacedFigure]| (0..f.len()).all(|i| (i + 1..f.len()).all(|j| distinct(&f[i], &f[j])));
    match task {
        TaskKind::Sd1 | TaskKind::Sd15 | TaskKind::Sd22 => {
            let want = match task {
                TaskKind::Sd1 => 2,
                TaskKind::Sd15 => 4,
                _ => 3,
            };
            if figures.len() != want {
                return None;
            }
            if all_same(figures) {
                Some(Class::One)
            } else if all_distinct(figures) {
                Some(Class::Two)
            } else {
                None
            }
        }
        TaskKind::Sd5 => {
            if figures.len() != 4 {
                return None;
            }
            if all_distinct(figures) {
                return Some(Class::Two);
            }
            // Two disjoint identical pairs, different from each other.
            let pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))];
            pairings
                .iter()
                .any(|&((a, b), (c, d))| {
                    same(&figures[a], &figures[b]) && same(&figures[c], &figures[d]) && distinct(&figures[a], &figures[c])
                })
                .then_some(Class::One)
        }
        TaskKind::Sd16 => {
            if figures.len() != 6 {
                return None;
            }
            let mid = IMAGE_SIZE / 2;
            let (left, right): (Vec<&PlacedFigure>, Vec<&PlacedFigure>) =
                figures.iter().partition(|f| f.x + f.mask.width() <= mid);
            if left.len() != 3 || right.len() != 3 {
                return None;
            }
            let mut mirrored = 0;
            let mut copied = 0;
            for l in &left {
                let lb = l.bounds();
                let partner = right.iter().find(|r| {
                    let rb = r.bounds();
                    (mirrored_x(&lb) as isize - rb.x as isize).abs() <= 1 && (lb.y as isize - rb.y as isize).abs() <= 1
                })?;
                if partner.mask.same_up_to_translation(&l.mask.flipped_horizontal()) {
                    mirrored += 1;
                }
                if partner.mask.same_up_to_translation(&l.mask) {
                    copied += 1;
                }
            }
            if mirrored == 3 {
                Some(Class::One)
            } else if copied == 3 {
                Some(Class::Two)
            } else {
                None
            }
        }
        _ => None,
    }
}
