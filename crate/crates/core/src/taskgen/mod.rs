//! Procedural same-different task images.
//!
//! Figures are one-pixel black outlines on a white 96x96 canvas, kept off
//! the two-pixel border and at least two pixels apart. Every sample is a
//! pure function of `(seed, index)`.

mod mask;
mod patterns;
mod scene;
mod shape;
mod tasks;

pub use mask::BitMask;
pub use patterns::{
    bars_seed, gen_bars, gen_gaze_pattern, gen_uniqueness_probe, BarsImage, GazePattern, UniquenessProbe,
    MAX_BAR_PERIOD, MIN_BAR_PERIOD,
};
pub use scene::{
    figures_from_image, inside_interior, render, PlacedFigure, Rect, BACKGROUND, BORDER, SEPARATION, STROKE,
};
pub use shape::{random_closed_shape, ShapeContour, CONTOUR_SAMPLES, MAX_SHAPE_SIZE, MIN_SHAPE_SIZE};
pub use tasks::{
    classify_by_rule, gen_task1, gen_task15, gen_task16, gen_task22, gen_task5, mirrored_x, Class, LabeledImage,
    TaskKind, DISTINCT_THRESHOLD, FIGURE_SIZES,
};
