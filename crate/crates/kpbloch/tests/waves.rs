//! Wave solver tests. Reference coefficient values were frozen from an
//! independent Newton-collocation implementation of the same equations and
//! pin the solver to 1e-12.

use approx::assert_abs_diff_eq;
use kpbloch::waves::{eval_wave, ode_residual, solve_wave, wave_asymptotic};
use kpbloch::Error;

#[test]
fn matches_reference_solution_a_005() {
    let w = solve_wave(0.05, 32, 1e-12).unwrap();
    assert_abs_diff_eq!(w.k_sq, 0.99947901511305492, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(0), -0.00062520630325729547, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(2), 0.00020844011715790114, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(3), 6.5171197381172614e-7, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(4), 1.8112464494258434e-9, epsilon = 1e-12);
}

#[test]
fn matches_reference_solution_a_01() {
    let w = solve_wave(0.1, 32, 1e-12).unwrap();
    assert_abs_diff_eq!(w.k_sq, 0.99791423722304251, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(0), -0.0025033076067749855, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(2), 0.00083504598642070746, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(3), 5.2298546654567166e-6, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(4), 2.9114968543201851e-8, epsilon = 1e-12);
}

#[test]
fn matches_reference_solution_a_02() {
    let w = solve_wave(0.2, 32, 1e-12).unwrap();
    assert_abs_diff_eq!(w.k_sq, 0.99162749777434012, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(0), -0.010053359552540315, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(2), 0.003361002621248603, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(3), 4.2364260831626252e-5, epsilon = 1e-12);
    assert_abs_diff_eq!(w.cosine(4), 4.7465481967553285e-7, epsilon = 1e-12);
}

#[test]
fn second_order_expansion_values() {
    // k^2 = 1 - 5 a^2 / 24 and p_2 = a^2 / 12 to second order.
    let w = solve_wave(0.1, 32, 1e-12).unwrap();
    assert_abs_diff_eq!(w.k_sq, 0.9979167, epsilon = 1e-4);
    assert_abs_diff_eq!(w.cosine(0), -0.0025, epsilon = 1e-4);
    assert_abs_diff_eq!(w.cosine(2), 8.3333e-4, epsilon = 1e-4);
}

#[test]
fn mode_one_amplitude_is_pinned_exactly() {
    for &a in &[0.05, -0.1, 0.23, 0.3] {
        let w = solve_wave(a, 16, 1e-12).unwrap();
        assert_eq!(w.cosine(1), a);
    }
}

#[test]
fn k_sq_remainder_is_fourth_order() {
    for &a in &[0.05, 0.1, 0.2, 0.3] {
        let w = solve_wave(a, 32, 1e-12).unwrap();
        let gap = (w.k_sq - (1.0 - 5.0 * a * a / 24.0)).abs();
        assert!(gap <= 2.0 * a.powi(4), "a={a}: gap {gap:.3e}");
    }
}

#[test]
fn amplitude_sign_flip_alternates_coefficients() {
    let plus = solve_wave(0.2, 24, 1e-12).unwrap();
    let minus = solve_wave(-0.2, 24, 1e-12).unwrap();
    assert_abs_diff_eq!(plus.k_sq, minus.k_sq, epsilon = 1e-13);
    for n in 0..=24 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert_abs_diff_eq!(minus.cosine(n), sign * plus.cosine(n), epsilon = 1e-12);
    }
}

#[test]
fn coefficients_decay_geometrically() {
    let w = solve_wave(0.3, 32, 1e-12).unwrap();
    for n in 1..12 {
        assert!(
            w.cosine(n + 1).abs() <= 0.5 * w.cosine(n).abs() + 1e-15,
            "mode {n} to {} does not contract",
            n + 1
        );
    }
}

#[test]
fn zero_amplitude_gives_zero_wave() {
    let w = solve_wave(0.0, 16, 1e-12).unwrap();
    assert_eq!(w.k_sq, 1.0);
    assert_eq!(w.residual, 0.0);
    for n in 0..=16 {
        assert_eq!(w.cosine(n), 0.0);
    }
}

#[test]
fn rejects_invalid_amplitudes() {
    assert!(matches!(
        solve_wave(0.31, 32, 1e-12),
        Err(Error::InvalidAmplitude { .. })
    ));
    assert!(matches!(
        solve_wave(f64::NAN, 32, 1e-12),
        Err(Error::InvalidAmplitude { .. })
    ));
}

#[test]
fn rejects_too_small_truncation_and_bad_tol() {
    assert!(matches!(
        solve_wave(0.1, 4, 1e-12),
        Err(Error::OutOfRange { .. })
    ));
    assert!(matches!(
        solve_wave(0.1, 32, 0.0),
        Err(Error::OutOfRange { .. })
    ));
}

#[test]
fn solved_wave_has_tiny_collocation_residual() {
    for &a in &[0.1, 0.2] {
        let w = solve_wave(a, 32, 1e-12).unwrap();
        assert!(w.residual <= 1e-12);
        assert!(ode_residual(&w, 256) <= 1e-10);
    }
}

#[test]
fn asymptotic_wave_evaluates_as_expected() {
    let w = wave_asymptotic(0.1);
    assert_eq!(w.k_sq, 1.0 - 5.0 * 0.01 / 24.0);
    assert_abs_diff_eq!(eval_wave(&w, 0.0), 0.098333333333333342, epsilon = 1e-15);
    assert_eq!(w.cosine(1), 0.1);
}

#[test]
fn asymptotic_wave_defect_is_third_order() {
    // The second-order truncation misses the equations at cubic order; the
    // measured constant is about 0.06 |a|^3.
    for &a in &[0.1, 0.2, 0.3] {
        let r = ode_residual(&wave_asymptotic(a), 256);
        assert!(r > 0.0);
        assert!(r <= 0.1 * a.abs().powi(3), "a={a}: residual {r:.3e}");
        assert!(r >= 0.01 * a.abs().powi(3), "a={a}: residual {r:.3e}");
    }
}

#[test]
fn asymptotic_matches_solved_to_third_order() {
    for &a in &[0.05, 0.1, 0.2] {
        let guess = wave_asymptotic(a);
        let w = solve_wave(a, 32, 1e-12).unwrap();
        assert!((guess.k_sq - w.k_sq).abs() <= 2.0 * a.powi(4));
        for n in 0..=2 {
            assert!((guess.cosine(n) - w.cosine(n)).abs() <= 2.0 * a.abs().powi(3));
        }
    }
}

#[test]
fn eval_matches_coefficient_sum() {
    let w = solve_wave(0.2, 16, 1e-12).unwrap();
    let z = 0.7;
    let direct: f64 = (0..=16)
        .map(|n| w.cosine(n) * (n as f64 * z).cos())
        .sum();
    assert_abs_diff_eq!(eval_wave(&w, z), direct, epsilon = 1e-15);
    // Even profile.
    assert_abs_diff_eq!(eval_wave(&w, z), eval_wave(&w, -z), epsilon = 1e-14);
    // Periodicity.
    assert_abs_diff_eq!(
        eval_wave(&w, z),
        eval_wave(&w, z + 2.0 * std::f64::consts::PI),
        epsilon = 1e-12
    );
}

#[test]
fn half_period_shift_flips_amplitude() {
    // P(z + pi) for amplitude a equals the profile for amplitude -a.
    let plus = solve_wave(0.2, 24, 1e-12).unwrap();
    let minus = solve_wave(-0.2, 24, 1e-12).unwrap();
    for &z in &[0.0, 0.3, 1.1, 2.9] {
        assert_abs_diff_eq!(
            eval_wave(&plus, z + std::f64::consts::PI),
            eval_wave(&minus, z),
            epsilon = 1e-11
        );
    }
}
