//! Scan, boundary-location and collision tests. These drive the full
//! pipeline at moderate truncation and compare the measurements with the
//! closed-form predictors.

use approx::assert_abs_diff_eq;
use kpbloch::asymptotics::{ell_a_sq, ell_c, eps_a, reduced_lambda_sq_periodic};
use kpbloch::scanner::{
    collision_locator, dispersion_curve, find_bubble, find_critical_ell, record_at, scan,
    DEFAULT_BISECT_TOL,
};
use kpbloch::spectra::DEFAULT_RE_TOL;
use kpbloch::waves::solve_wave;
use kpbloch::Error;

#[test]
fn zero_wave_is_stable_everywhere_sampled() {
    let w = solve_wave(0.0, 16, 1e-12).unwrap();
    for &(gamma, ell) in &[(0.0, 0.5), (0.25, 0.2), (0.5, 0.7)] {
        let (r, report) = record_at(&w, 1, gamma, ell, 16, DEFAULT_RE_TOL).unwrap();
        assert_eq!(r.unstable_count, 0);
        assert!(r.max_real_part <= 1e-12);
        assert!(r.krein_ok);
        assert!(report.symmetry_residual_imag_axis <= 1e-12);
    }
}

#[test]
fn long_wavelength_instability_switches_off_at_threshold() {
    let w = solve_wave(0.1, 32, 1e-12).unwrap();

    let (unstable, _) = record_at(&w, 1, 0.0, 0.02, 32, DEFAULT_RE_TOL).unwrap();
    assert_eq!(unstable.unstable_count, 1);
    assert_eq!(unstable.negative_count, 1);
    assert!(unstable.l_invertible);
    assert!(unstable.krein_ok);
    let predicted = reduced_lambda_sq_periodic(0.1, 0.02, 1).sqrt();
    assert!(
        (unstable.max_real_part - predicted).abs() / predicted <= 0.05,
        "growth {} vs predicted {predicted}",
        unstable.max_real_part
    );

    let (stable, _) = record_at(&w, 1, 0.0, 0.5, 32, DEFAULT_RE_TOL).unwrap();
    assert_eq!(stable.unstable_count, 0);
    assert!(stable.max_real_part <= 1e-8);
}

#[test]
fn bloch_bubble_shows_the_unstable_quadruple() {
    let w = solve_wave(0.05, 32, 1e-12).unwrap();
    let gamma = 0.25;
    let center = ell_c(gamma).unwrap().powi(2);
    let eps = eps_a(gamma, 0.05).unwrap();

    let mut counts = Vec::new();
    for ell_sq in [center - 3.0 * eps, center, center + 3.0 * eps] {
        let (r, _) = record_at(&w, 1, gamma, ell_sq.sqrt(), 32, DEFAULT_RE_TOL).unwrap();
        counts.push(r.unstable_count);
        assert!(r.krein_ok);
        if r.unstable_count > 0 {
            // Union of the +-gamma blocks: growth comes in +- pairs.
            let growth = 0.5 * (gamma * (1.0 - gamma)).sqrt() * 0.05;
            assert!(
                (r.max_real_part - growth).abs() / growth <= 0.2,
                "growth {} vs predicted {growth}",
                r.max_real_part
            );
            assert!(r.unstable_count <= r.negative_count);
        }
    }
    assert_eq!(counts, vec![0, 2, 0]);
}

#[test]
fn bubble_from_the_reflected_floquet_alias() {
    // gamma = 1/2 works through the -1/2 alias block; the center of its
    // bubble is ell^2 = 3/16 exactly.
    let w = solve_wave(0.05, 32, 1e-12).unwrap();
    let (r, _) = record_at(&w, 1, 0.5, 0.1875f64.sqrt(), 32, DEFAULT_RE_TOL).unwrap();
    assert_eq!(r.unstable_count, 2);
    assert!(r.krein_ok);
}

#[test]
fn record_rejects_bad_parameters() {
    let w = solve_wave(0.1, 16, 1e-12).unwrap();
    assert!(matches!(
        record_at(&w, 1, 0.02, 0.3, 16, DEFAULT_RE_TOL),
        Err(Error::OutOfRange { name: "gamma", .. })
    ));
    for bad_ell in [0.0, -0.3, f64::NAN] {
        assert!(matches!(
            record_at(&w, 1, 0.25, bad_ell, 16, DEFAULT_RE_TOL),
            Err(Error::OutOfRange { name: "ell", .. })
        ));
    }
}

#[test]
fn scan_is_gamma_major_and_complete() {
    let w = solve_wave(0.05, 16, 1e-12).unwrap();
    let gammas = [0.0, 0.25];
    let ells = [0.3, 0.5, 0.7];
    let records = scan(&w, 1, &gammas, &ells, 16, DEFAULT_RE_TOL).unwrap();
    assert_eq!(records.len(), 6);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r.gamma, gammas[i / 3]);
        assert_eq!(r.ell, ells[i % 3]);
        assert_eq!(r.a, 0.05);
        assert_eq!(r.sigma, 1);
        assert!(r.krein_ok);
    }
    assert!(matches!(
        scan(&w, 1, &[0.01], &ells, 16, DEFAULT_RE_TOL),
        Err(Error::OutOfRange { name: "gamma", .. })
    ));
}

#[test]
fn critical_ell_matches_the_long_wavelength_threshold() {
    let w = solve_wave(0.2, 32, 1e-12).unwrap();
    let r = find_critical_ell(&w, 1, 0.0, (0.01, 0.2), DEFAULT_BISECT_TOL).unwrap();
    assert!(r.bracket.0 <= r.critical_ell && r.critical_ell <= r.bracket.1);
    assert!(r.bracket.1 - r.bracket.0 <= DEFAULT_BISECT_TOL);
    assert!((15..=25).contains(&r.iterations), "iterations {}", r.iterations);
    assert_eq!(r.predictor, ell_a_sq(0.2).sqrt());
    assert!(r.relative_gap <= 0.05, "relative gap {}", r.relative_gap);
}

#[test]
fn critical_ell_validates_inputs() {
    let w = solve_wave(0.1, 16, 1e-12).unwrap();
    assert!(matches!(
        find_critical_ell(&w, 1, 0.0, (0.0, 0.2), DEFAULT_BISECT_TOL),
        Err(Error::OutOfRange { name: "bracket", .. })
    ));
    assert!(matches!(
        find_critical_ell(&w, 1, 0.0, (0.3, 0.2), DEFAULT_BISECT_TOL),
        Err(Error::OutOfRange { name: "bracket", .. })
    ));
    assert!(matches!(
        find_critical_ell(&w, 1, 0.0, (0.01, 0.2), 0.0),
        Err(Error::OutOfRange { name: "bisect_tol", .. })
    ));
    // KP-II has no long-wavelength boundary: both ends stable.
    assert!(matches!(
        find_critical_ell(&w, -1, 0.0, (0.005, 0.05), DEFAULT_BISECT_TOL),
        Err(Error::NoSignChange { .. })
    ));
}

#[test]
fn bubble_measurement_agrees_with_the_prediction() {
    let w = solve_wave(0.05, 32, 1e-12).unwrap();
    let gamma = 0.25;
    let eps = eps_a(gamma, 0.05).unwrap();
    let b = find_bubble(&w, 1, gamma, eps / 4.0).unwrap();
    assert!(b.ell_sq_lo < b.prediction.center_ell_sq);
    assert!(b.prediction.center_ell_sq < b.ell_sq_hi);
    assert!(b.center_rel_gap <= 0.05, "center gap {}", b.center_rel_gap);
    assert!(
        b.half_width_rel_gap <= 0.30,
        "half width gap {}",
        b.half_width_rel_gap
    );
}

#[test]
fn bubble_requires_kpi_amplitude_and_valid_gamma() {
    let w = solve_wave(0.05, 16, 1e-12).unwrap();
    assert!(matches!(
        find_bubble(&w, -1, 0.25, 1e-3),
        Err(Error::OutOfRange { name: "sigma", .. })
    ));
    assert!(matches!(
        find_bubble(&w, 1, 0.01, 1e-3),
        Err(Error::OutOfRange { name: "gamma", .. })
    ));
    assert!(matches!(
        find_bubble(&w, 1, 0.25, -1e-3),
        Err(Error::OutOfRange { name: "coarse_step", .. })
    ));
    let flat = solve_wave(0.0, 16, 1e-12).unwrap();
    assert!(matches!(
        find_bubble(&flat, 1, 0.25, 1e-3),
        Err(Error::BubbleNotFound { .. })
    ));
}

#[test]
fn collision_locations_match_the_closed_form() {
    assert_eq!(collision_locator(1, 1, (0.0, 1.0), -1).unwrap(), 0.0);
    let l21 = collision_locator(2, 1, (1.0, 3.0), -1).unwrap();
    assert_abs_diff_eq!(l21, 2.0, epsilon = 1e-9);
    let l31 = collision_locator(3, 1, (3.0, 5.0), -1).unwrap();
    assert_abs_diff_eq!(l31, 18.0f64.sqrt(), epsilon = 1e-9);
    let l22 = collision_locator(2, 2, (3.0, 4.0), -1).unwrap();
    assert_abs_diff_eq!(l22, 12.0f64.sqrt(), epsilon = 1e-9);
    // An endpoint that already solves the equation is returned exactly.
    assert_eq!(collision_locator(2, 1, (2.0, 3.0), -1).unwrap(), 2.0);
}

#[test]
fn collision_locator_validates_inputs() {
    assert!(matches!(
        collision_locator(2, 1, (1.0, 3.0), 1),
        Err(Error::OutOfRange { name: "sigma", .. })
    ));
    assert!(matches!(
        collision_locator(0, 1, (1.0, 3.0), -1),
        Err(Error::OutOfRange { .. })
    ));
    assert!(matches!(
        collision_locator(3, 4, (3.0, 4.0), -1),
        Err(Error::NoSignChange { .. })
    ));
}

#[test]
fn dispersion_samples_carry_the_symbol_values() {
    let rows = dispersion_curve(-1, 0.3, (1.0, 2.0), 3).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].0, 1.0);
    assert_eq!(rows[1].0, 1.5);
    assert_eq!(rows[2].0, 2.0);
    assert_abs_diff_eq!(rows[0].1, 0.09, epsilon = 1e-16);
    assert_abs_diff_eq!(rows[0].2, -0.09, epsilon = 1e-16);

    let rows = dispersion_curve(1, 0.8, (1.0, 2.0), 2).unwrap();
    assert_abs_diff_eq!(rows[0].1, -0.64, epsilon = 1e-15);
    assert_abs_diff_eq!(rows[0].2, 0.64, epsilon = 1e-15);
}

#[test]
fn dispersion_is_odd_in_k_and_even_in_mu() {
    let pos = dispersion_curve(1, 0.4, (0.5, 2.5), 9).unwrap();
    let neg = dispersion_curve(1, 0.4, (-2.5, -0.5), 9).unwrap();
    for (p, n) in pos.iter().zip(neg.iter().rev()) {
        assert_eq!(p.0, -n.0);
        assert_abs_diff_eq!(p.1, -n.1, epsilon = 1e-14);
        assert_abs_diff_eq!(p.2, n.2, epsilon = 1e-14);
    }
}

#[test]
fn dispersion_rejects_grids_touching_zero() {
    for bad in [(-1.0, 1.0), (0.0, 1.0), (-1.0, 0.0), (2.0, 1.0)] {
        assert!(matches!(
            dispersion_curve(1, 0.3, bad, 8),
            Err(Error::OutOfRange { name: "k_range", .. })
        ));
    }
    assert!(matches!(
        dispersion_curve(1, 0.3, (1.0, 2.0), 1),
        Err(Error::OutOfRange { name: "samples", .. })
    ));
}

#[test]
fn classification_is_stable_under_truncation_refinement() {
    let w32 = solve_wave(0.1, 32, 1e-12).unwrap();
    for &(gamma, ell) in &[(0.25, 0.3), (0.0, 0.02)] {
        let (r32, _) = record_at(&w32, 1, gamma, ell, 32, DEFAULT_RE_TOL).unwrap();
        let (r48, _) = record_at(&w32, 1, gamma, ell, 48, DEFAULT_RE_TOL).unwrap();
        assert_eq!(r32.unstable_count, r48.unstable_count);
        assert_eq!(r32.negative_count, r48.negative_count);
        assert!(
            (r32.max_real_part - r48.max_real_part).abs() <= 1e-8,
            "truncation drift at ({gamma}, {ell})"
        );
    }
}
