//! Randomized invariants: symmetries that hold for every parameter choice,
//! not just the reference points pinned in the other suites.

use kpbloch::asymptotics::{
    ell_0_sq, ell_a_sq, ell_c, ell_minus_sq, eps_a, mu_n, omega_n, reduced_lambda_sq_periodic,
    reduced_matrix_bloch,
};
use kpbloch::fourier::{cosine_product, FourierCoeffs};
use kpbloch::operators::{convolution_matrix, BlochParams};
use kpbloch::spectra::classify;
use kpbloch::waves::solve_wave;
use num_complex::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;

fn amplitudes() -> impl Strategy<Value = Vec<f64>> {
    vec(-0.5f64..0.5, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cosine_series_are_real_even_and_periodic(amps in amplitudes(), z in 0.0..6.28) {
        let f = FourierCoeffs::from_cosine(&amps);
        prop_assert_eq!(f.realness_defect(), 0.0);
        prop_assert_eq!(f.evenness_defect(), 0.0);
        let two_pi = 2.0 * std::f64::consts::PI;
        prop_assert!((f.eval(z) - f.eval(-z)).norm() <= 1e-12);
        prop_assert!((f.eval(z) - f.eval(z + two_pi)).norm() <= 1e-10);
    }

    #[test]
    fn cosine_product_commutes(p in amplitudes(), q in amplitudes()) {
        let pq = cosine_product(&p, &q);
        let qp = cosine_product(&q, &p);
        prop_assert_eq!(pq.len(), qp.len());
        for (x, y) in pq.iter().zip(&qp) {
            prop_assert!((x - y).abs() <= 1e-14);
        }
    }

    #[test]
    fn convolution_matrix_matches_pointwise_products(
        amps in amplitudes(),
        seed in 0u64..1000,
    ) {
        let f = FourierCoeffs::from_cosine(&amps);
        let modes: Vec<i64> = (-6..=6).collect();
        let t = convolution_matrix(&f, &modes);
        let v: Vec<Complex64> = modes
            .iter()
            .enumerate()
            .map(|(i, _)| {
                let s = seed.wrapping_mul(i as u64 + 1) % 17;
                Complex64::new(s as f64 / 17.0 - 0.5, (s as f64 / 5.0).sin())
            })
            .collect();
        let grid = 256;
        for (i, &m) in modes.iter().enumerate() {
            let got: Complex64 = (0..modes.len()).map(|j| t[[i, j]] * v[j]).sum();
            let expect = (0..grid)
                .map(|g| {
                    let z = 2.0 * std::f64::consts::PI * g as f64 / grid as f64;
                    let gval: Complex64 = modes
                        .iter()
                        .zip(&v)
                        .map(|(&n, &c)| c * Complex64::new(0.0, n as f64 * z).exp())
                        .sum();
                    (Complex64::new(1.0, 0.0) + f.eval(z))
                        * gval
                        * Complex64::new(0.0, -(m as f64) * z).exp()
                })
                .sum::<Complex64>()
                / grid as f64;
            prop_assert!((got - expect).norm() <= 1e-10);
        }
    }

    #[test]
    fn predictors_are_even_in_amplitude(a in -0.3f64..0.3, gamma in 0.05f64..0.5) {
        prop_assert_eq!(ell_a_sq(a), ell_a_sq(-a));
        prop_assert_eq!(eps_a(gamma, a).unwrap(), eps_a(gamma, -a).unwrap());
        let ell = 0.3;
        prop_assert_eq!(
            reduced_lambda_sq_periodic(a, ell, 1),
            reduced_lambda_sq_periodic(-a, ell, 1)
        );
    }

    #[test]
    fn omega_is_minus_x_mu(n in -5i64..5, gamma in 0.05f64..0.5, ell in 0.0f64..2.0) {
        let p = BlochParams::new(1, ell, gamma, 8).unwrap();
        let x = n as f64 + gamma;
        prop_assert_eq!(omega_n(n, &p).unwrap(), -x * mu_n(n, &p).unwrap());
    }

    #[test]
    fn threshold_curves_keep_their_order(gamma in 0.004f64..0.496) {
        let lo = ell_0_sq(gamma).unwrap();
        let mid = ell_c(gamma).unwrap().powi(2);
        let hi = ell_minus_sq(gamma).unwrap();
        prop_assert!(lo < mid);
        prop_assert!(mid < hi);
    }

    #[test]
    fn symmetrized_sets_have_even_off_axis_counts(
        points in vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
    ) {
        let mut eigs: Vec<Complex64> = points
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        let reflected: Vec<Complex64> = eigs.iter().map(|z| -z.conj()).collect();
        eigs.extend(reflected);
        let p = BlochParams::new(1, 0.3, 0.25, 4).unwrap();
        let r = classify(&eigs, &p, 1e-8);
        prop_assert_eq!(r.off_axis_count() % 2, 0);
        prop_assert!(r.max_real_part >= 0.0);
        prop_assert!(r.symmetry_residual_imag_axis <= 1e-15);
    }

    #[test]
    fn bloch_reduction_roots_solve_the_quadratic(
        a in 0.005f64..0.3,
        gamma in 0.05f64..0.5,
        detune in -3.0f64..3.0,
    ) {
        let lc_sq = ell_c(gamma).unwrap().powi(2);
        let eps = eps_a(gamma, a).unwrap();
        let ell_sq = lc_sq + detune * eps;
        prop_assume!(ell_sq > 1e-6);
        let r = reduced_matrix_bloch(a, ell_sq.sqrt(), gamma).unwrap();
        let (m1, m2) = r.matrix.eigenvalues();
        let (e1, e2) = r.eigenvalues;
        let pairing = ((m1 - e1).norm() + (m2 - e2).norm())
            .min((m1 - e2).norm() + (m2 - e1).norm());
        prop_assert!(pairing <= 1e-12, "pairing defect {}", pairing);
        // Strictly inside the predicted bubble the reduction is unstable,
        // strictly outside it is neutral; skip the boundary sliver.
        if detune.abs() < 0.99 {
            prop_assert!(r.unstable);
        } else if detune.abs() > 1.01 {
            prop_assert!(!r.unstable);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn half_period_shift_flips_the_amplitude_sign(a in 0.01f64..0.28) {
        let plus = solve_wave(a, 16, 1e-12).unwrap();
        let minus = solve_wave(-a, 16, 1e-12).unwrap();
        prop_assert_eq!(plus.cosine(1), a);
        prop_assert_eq!(minus.cosine(1), -a);
        prop_assert!((plus.k_sq - minus.k_sq).abs() <= 1e-12);
        for n in 0..=16usize {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!(
                (minus.cosine(n) - sign * plus.cosine(n)).abs() <= 1e-10,
                "coefficient {} breaks the shift symmetry", n
            );
        }
    }

    #[test]
    fn wave_coefficients_decay_geometrically(a in 0.01f64..0.28) {
        let w = solve_wave(a, 16, 1e-12).unwrap();
        for n in 1..16usize {
            prop_assert!(
                w.cosine(n + 1).abs() <= 0.6 * w.cosine(n).abs() + 1e-15,
                "decay fails at mode {}", n
            );
        }
        prop_assert!(w.residual <= 1e-12);
    }
}
