mod common;

use common::*;
use proptest::prelude::*;
use specsal_core::fewshot::DEFAULT_SIGMA;
use specsal_core::filters::{GaussianFilterSpec, PercentileFilterSpec};
use specsal_core::saliency::*;
use specsal_core::spectrum::Complex64;
use specsal_core::taskgen::*;
use specsal_core::{GrayImage, Grid};

const N: usize = 16;

/// `|IDFT(magnitude(A) * exp(i P))|`, min-max normalized, all by brute force.
fn oracle_map(img: &GrayImage, magnitude: impl Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let spec = brute_dft(N, N, &real_to_complex(img.data()), -1.0);
    let amp: Vec<f64> = spec.iter().map(|z| z.norm()).collect();
    let m = magnitude(&amp);
    let rebuilt: Vec<Complex64> = spec
        .iter()
        .zip(&m)
        .map(|(z, m)| if z.norm() == 0.0 { Complex64::new(*m, 0.0) } else { z / z.norm() * m })
        .collect();
    let field = brute_dft(N, N, &rebuilt, 1.0);
    min_max(&field.iter().map(|z| z.norm() / (N * N) as f64).collect::<Vec<_>>())
}

fn gauss_weights(sigma: f64) -> (Vec<f64>, usize) {
    let r = (3.0 * sigma).ceil() as isize;
    let n = (2 * r + 1) as usize;
    let mut w = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            w.push((-((dx * dx + dy * dy) as f64) / (2.0 * sigma * sigma)).exp());
        }
    }
    let s: f64 = w.iter().sum();
    (w.into_iter().map(|v| v / s).collect(), n)
}

fn mean_over(map: &SaliencyMap, pixels: impl Iterator<Item = (usize, usize)>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for (x, y) in pixels {
        s += map.get(x, y);
        n += 1;
    }
    s / n as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectral_residual_matches_oracle(img in arb_image(N, N)) {
        let got = spectral_residual_map(&img, 3).unwrap();
        let box3 = vec![1.0 / 9.0; 9];
        let want = oracle_map(&img, |a| {
            let log: Vec<f64> = a.iter().map(|v| (v + 1e-12).ln()).collect();
            let smooth = brute_correlate(N, N, &log, &box3, 3);
            log.iter().zip(&smooth).map(|(l, s)| (l - s).exp()).collect()
        });
        prop_assert!(max_abs_diff(got.data(), &want) < 1e-9);
    }

    #[test]
    fn phase_only_matches_oracle(img in arb_image(N, N)) {
        let got = phase_only_map(&img).unwrap();
        let want = oracle_map(&img, |a| vec![1.0; a.len()]);
        prop_assert!(max_abs_diff(got.data(), &want) < 1e-9);
    }

    #[test]
    fn smoothed_amplitude_matches_oracle(img in arb_image(N, N), sigma in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let got = smoothed_amplitude_map(&img, &GaussianFilterSpec::new(sigma).unwrap()).unwrap();
        let (k, n) = gauss_weights(sigma);
        let want = oracle_map(&img, |a| brute_correlate(N, N, a, &k, n));
        prop_assert!(max_abs_diff(got.data(), &want) < 1e-9);
    }

    #[test]
    fn percentile_map_matches_oracle(img in arb_image(N, N), p in prop::sample::select(vec![5.0, 10.0, 40.0]), w in prop::sample::select(vec![3usize, 5])) {
        let got = percentile_saliency_map(&img, &PercentileFilterSpec::new(p, w).unwrap()).unwrap();
        let want = oracle_map(&img, |a| sort_percentile(N, N, a, p, w));
        prop_assert!(max_abs_diff(got.data(), &want) < 1e-9);
    }

    #[test]
    fn postprocess_matches_oracle(values in prop::collection::vec(0.0f64..1.0, N * N)) {
        let map = SaliencyMap::new(Grid::new(N, N, values.clone()).unwrap()).unwrap();
        let got = postprocess(&map, &GaussianFilterSpec::new(1.5).unwrap()).unwrap();
        let (k, n) = gauss_weights(1.5);
        let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
        prop_assert!(max_abs_diff(got.data(), &min_max(&brute_correlate(N, N, &sq, &k, n))) < 1e-12);
    }

    #[test]
    fn maps_are_deterministic(img in arb_image(N, N)) {
        let spec = PercentileFilterSpec::new(10.0, 3).unwrap();
        prop_assert_eq!(percentile_saliency_map(&img, &spec).unwrap(), percentile_saliency_map(&img, &spec).unwrap());
        prop_assert_eq!(spectral_residual_map(&img, 3).unwrap(), spectral_residual_map(&img, 3).unwrap());
    }
}

#[test]
fn intensity_shift_barely_moves_maps() {
    let g = GaussianFilterSpec::new(DEFAULT_SIGMA).unwrap();
    let spec = PercentileFilterSpec::from_fraction(10.0, 0.2, 96).unwrap();
    for seed in 0..4 {
        let sample = &TaskKind::Sd1.generate(seed, 1).unwrap()[0];
        let dark = GrayImage::from_grid(sample.image.grid().map(|v| v * 0.9));
        let lifted = GrayImage::from_grid(dark.grid().map(|v| v + 0.1));
        let maps: [fn(&GrayImage, &GaussianFilterSpec, &PercentileFilterSpec) -> SaliencyMap; 4] = [
            |i, _, _| spectral_residual_map(i, 3).unwrap(),
            |i, _, _| phase_only_map(i).unwrap(),
            |i, g, _| smoothed_amplitude_map(i, g).unwrap(),
            |i, _, s| percentile_saliency_map(i, s).unwrap(),
        ];
        for (idx, f) in maps.iter().enumerate() {
            let (a, b) = (f(&dark, &g, &spec), f(&lifted, &g, &spec));
            let mad = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.data().len() as f64;
            assert!(mad < 0.02, "map {idx} seed {seed}: mean abs diff {mad}");
        }
    }
}

#[test]
fn identity_filters_reproduce_the_image() {
    let img = image(N, N, (0..N * N).map(|i| ((i * 37) % 101) as f64 / 100.0).collect());
    let want = min_max(img.data());
    let id = percentile_saliency_map(&img, &PercentileFilterSpec::new(100.0, 1).unwrap()).unwrap();
    assert!(max_abs_diff(id.data(), &want) < 1e-9);
    let near = smoothed_amplitude_map(&img, &GaussianFilterSpec::new(0.05).unwrap()).unwrap();
    assert!(max_abs_diff(near.data(), &want) < 0.02);
}

#[test]
fn impulse_peaks_in_phase_only_map() {
    let mut img = GrayImage::filled(N, N, 0.0).unwrap();
    img.set(5, 11, 1.0);
    assert_eq!(phase_only_map(&img).unwrap().argmax(), (5, 11));
}

#[test]
fn constant_images_are_flagged() {
    let img = GrayImage::filled(N, N, 0.3).unwrap();
    let map = spectral_residual_map(&img, 3).unwrap();
    assert!(map.is_degenerate());
    assert!(map.data().iter().all(|&v| v == 0.0));
    assert!(phase_only_map(&img).unwrap().is_degenerate());
}

#[test]
fn postprocess_squares_first() {
    let values = vec![0.0, 0.5, 1.0, 0.5, 0.0, 1.0, 1.0, 0.5, 0.0];
    let map = SaliencyMap::new(Grid::new(3, 3, values.clone()).unwrap()).unwrap();
    let out = postprocess(&map, &GaussianFilterSpec::new(0.01).unwrap()).unwrap();
    let squared: Vec<f64> = values.iter().map(|v| v * v).collect();
    assert!(max_abs_diff(out.data(), &squared) < 1e-12);
    let flat = SaliencyMap::new(Grid::filled(8, 8, 0.5).unwrap()).unwrap();
    let out = postprocess(&flat, &GaussianFilterSpec::new(0.01).unwrap()).unwrap();
    assert!(out.data().iter().all(|&v| v == 0.0));
}

// On a perfectly periodic lattice the residual keeps the lattice peaks, so
// the map only isolates the column of the gap, not the ring itself.
#[test]
#[ignore = "spectral residual localizes only the gap column on the lattice pattern"]
fn spectral_residual_finds_the_open_ring() {
    let g = gen_gaze_pattern(TaskKind::GazeClosure).unwrap();
    let (x, y) = spectral_residual_map(&g.image, 3).unwrap().argmax();
    assert!(g.target.contains(x, y), "argmax ({x}, {y}) outside {:?}", g.target);
}

#[test]
fn smoothing_dims_bars_relative_to_shapes() {
    let g = GaussianFilterSpec::new(2.0).unwrap();
    for seed in 0..5 {
        let bars = gen_bars(seed, 8, true).unwrap();
        let map = smoothed_amplitude_map(&bars.image, &g).unwrap();
        let on_shape: std::collections::HashSet<(usize, usize)> = bars.figures.iter().flat_map(|f| f.pixels()).collect();
        let bar_pixels = (0..96).flat_map(|y| (0..96).map(move |x| (x, y))).filter(|&(x, y)| {
            bars.is_bar_column(x) && !on_shape.contains(&(x, y)) && bars.image.get(x, y) < 0.5
        });
        let (b, s) = (mean_over(&map, bar_pixels), mean_over(&map, on_shape.iter().copied()));
        assert!(b < s, "seed {seed}: bars {b} vs shapes {s}");
    }
}

fn stroke_contrast(map: &SaliencyMap, img: &GrayImage, figures: &[PlacedFigure]) -> f64 {
    let background = (0..96)
        .flat_map(|y| (0..96).map(move |x| (x, y)))
        .filter(|&(x, y)| img.get(x, y) > 0.5);
    mean_over(map, figures.iter().flat_map(|f| f.pixels())) / mean_over(map, background)
}

fn sd15_pairs() -> Vec<(LabeledImage, LabeledImage)> {
    let samples = TaskKind::Sd15.generate(3, 20).unwrap();
    samples.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect()
}

#[test]
fn percentile_map_dims_duplicates_relative_to_background() {
    let spec = PercentileFilterSpec::from_fraction(10.0, 0.2, 96).unwrap();
    let pairs = sd15_pairs();
    let mut wins = 0;
    for (pos, neg) in &pairs {
        assert_eq!((pos.label, neg.label), (Class::One, Class::Two));
        let mp = percentile_saliency_map(&pos.image, &spec).unwrap();
        let mn = percentile_saliency_map(&neg.image, &spec).unwrap();
        if stroke_contrast(&mp, &pos.image, &pos.figures) < stroke_contrast(&mn, &neg.image, &neg.figures) {
            wins += 1;
        }
    }
    assert!(wins * 10 >= pairs.len() * 8, "{wins}/{}", pairs.len());
}

// Each map is min-max normalized on its own, which pins the brightest
// stroke of either sample near 1 and leaves absolute stroke means close.
#[test]
#[ignore = "absolute stroke means of separately normalized maps do not separate the classes"]
fn percentile_map_dims_duplicates_against_unique_negatives() {
    let spec = PercentileFilterSpec::from_fraction(10.0, 0.2, 96).unwrap();
    let pairs = sd15_pairs();
    let mut wins = 0;
    for (pos, neg) in &pairs {
        let mp = percentile_saliency_map(&pos.image, &spec).unwrap();
        let mn = percentile_saliency_map(&neg.image, &spec).unwrap();
        let dup = mean_over(&mp, pos.figures.iter().flat_map(|f| f.pixels()));
        let uni = mean_over(&mn, neg.figures.iter().flat_map(|f| f.pixels()));
        if dup < uni {
            wins += 1;
        }
    }
    assert!(wins * 10 >= pairs.len() * 8, "{wins}/{}", pairs.len());
}
