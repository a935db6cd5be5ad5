mod common;

use common::*;
use proptest::prelude::*;
use specsal_core::spectrum::*;
use specsal_core::Grid;

fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).norm() <= tol, "{x} vs {y}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn forward_matches_brute_force(img in arb_image(16, 16)) {
        let fast = dft2_forward(&img);
        let slow = brute_dft(16, 16, &real_to_complex(img.data()), -1.0);
        assert_close(fast.data(), &slow, 1e-9);
    }

    #[test]
    fn forward_matches_brute_force_odd_dims(img in arb_image(9, 15)) {
        let fast = dft2_forward(&img);
        let slow = brute_dft(9, 15, &real_to_complex(img.data()), -1.0);
        assert_close(fast.data(), &slow, 1e-9);
    }

    #[test]
    fn inverse_matches_brute_force_on_symmetric_spectra(img in arb_image(16, 16)) {
        let spec = dft2_forward(&img);
        prop_assert!(is_conjugate_symmetric(&spec, 1e-9));
        let back = dft2_inverse_complex(&spec);
        let slow: Vec<Complex64> = brute_dft(16, 16, spec.data(), 1.0).into_iter().map(|z| z / 256.0).collect();
        assert_close(back.data(), &slow, 1e-9);
    }

    #[test]
    fn round_trip_and_parseval(img in arb_image(16, 16)) {
        let spec = dft2_forward(&img);
        let back = dft2_inverse(&spec);
        prop_assert!(max_abs_diff(back.data(), img.data()) < 1e-9);
        let spatial: f64 = img.data().iter().map(|v| v * v).sum();
        let freq: f64 = spec.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / 256.0;
        prop_assert!((spatial - freq).abs() <= 1e-9 * spatial.max(1.0));
    }

    #[test]
    fn split_recombine_is_exact(img in arb_image(12, 12)) {
        let spec = dft2_forward(&img);
        let (amp, phase) = split_amp_phase(&spec);
        let again = recombine(&amp, &phase).unwrap();
        assert_close(again.data(), spec.data(), 1e-12 * spec.data()[0].norm().max(1.0));
        for (a, z) in amp.data().iter().zip(spec.data()) {
            prop_assert!((a - z.norm()).abs() <= 1e-12 * z.norm().max(1.0));
        }
    }

    #[test]
    fn log_amplitude_is_elementwise(values in prop::collection::vec(1e-6f64..1e6, 64)) {
        let amp = AmplitudeSpectrum::new(8, 8, values.clone()).unwrap();
        let log = log_amplitude(&amp);
        for (l, v) in log.data().iter().zip(&values) {
            let want = (v + LOG_EPSILON).ln();
            prop_assert!((l - want).abs() <= 4.0 * f64::EPSILON * want.abs().max(1.0));
        }
    }

    #[test]
    fn vertical_bars_live_on_the_first_row(row in prop::collection::vec(0.0f64..1.0, 24)) {
        let img = image(24, 20, (0..20).flat_map(|_| row.clone()).collect());
        let amp = amplitude(&dft2_forward(&img));
        for v in 1..20 {
            for u in 0..24 {
                prop_assert!(amp.get(u, v) < 1e-9);
            }
        }
    }

    #[test]
    fn modified_amplitude_reconstruction_matches_pipeline(img in arb_image(16, 16), gain in prop::collection::vec(0.0f64..2.0, 256)) {
        let (amp, phase) = split_amp_phase(&dft2_forward(&img));
        let modified = Grid::new(16, 16, amp.data().iter().zip(&gain).map(|(a, g)| a * g).collect()).unwrap();
        let rec = dft2_inverse_complex(&recombine_magnitude(&modified, &phase).unwrap());

        let slow_spec = brute_dft(16, 16, &real_to_complex(img.data()), -1.0);
        let scaled: Vec<Complex64> = slow_spec.iter().zip(&gain).map(|(z, g)| {
            if z.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { z * g }
        }).collect();
        let slow: Vec<Complex64> = brute_dft(16, 16, &scaled, 1.0).into_iter().map(|z| z / 256.0).collect();
        assert_close(rec.data(), &slow, 1e-9);
    }
}

#[test]
fn impulse_has_flat_spectrum() {
    let mut data = vec![0.0; 64];
    data[9] = 1.0;
    let amp = amplitude(&dft2_forward(&image(8, 8, data)));
    assert!(amp.data().iter().all(|a| (a - 1.0).abs() < 1e-12));
}

#[test]
fn dc_is_the_pixel_sum() {
    let img = image(4, 3, (0..12).map(|i| i as f64 / 12.0).collect());
    let spec = dft2_forward(&img);
    assert!((spec.data()[0].re - 5.5).abs() < 1e-12);
    assert!(spec.data()[0].im.abs() < 1e-12);
}
