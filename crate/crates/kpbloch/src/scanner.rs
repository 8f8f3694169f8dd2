//! Parameter sweeps and boundary location.
//!
//! A scan walks a (gamma, ell) grid for one wave and produces one stability
//! record per point. At gamma = 0 a record reflects the single zero-mean
//! block. At gamma != 0 the record aggregates the Floquet pair {+gamma,
//! -gamma}: the spectrum on the line is the union over both exponents, and
//! since the two blocks have negated spectra, an instability always shows up
//! as a quadruple {q + ic, -q + ic, q - ic, -q - ic} in the union. This
//! keeps unstable_count in {0, 2} inside a bubble and makes the counting
//! inequality k_u <= n(L) refer to matching two-block quantities.
//!
//! Boundary location is plain bisection on the indicator "unstable_count >
//! 0", which is robust because growth rates rise steeply (like sqrt of the
//! distance) inside the unstable bands.

use rayon::prelude::*;

use crate::asymptotics::{ell_a_sq, ell_mp_sq, BubblePrediction};
use crate::error::{Error, Result};
use crate::operators::{build_a, build_l, BlochParams};
use crate::spectra::{
    classify, eig_general, krein_audit, negative_count, summarize_negative, SpectrumReport,
    DEFAULT_EIG_TOL, DEFAULT_INV_TOL,
};
use crate::sym;
use crate::waves::Wave;

/// Smallest nonzero Floquet exponent accepted by scans; the gamma = 0 code
/// path covers the long-wavelength regime instead.
pub const GAMMA_MIN: f64 = 0.05;
/// Default bisection width (in ell) for boundary location.
pub const DEFAULT_BISECT_TOL: f64 = 1e-6;
/// Default Galerkin order for spectra.
pub const DEFAULT_SPECTRUM_N_TRUNC: usize = 48;

/// Bisection width in ell^2 used when refining bubble edges.
const EDGE_TOL_ELL_SQ: f64 = 1e-9;

/// Stability summary of one (gamma, ell) grid point.
#[derive(Debug, Clone, Copy)]
pub struct StabilityRecord {
    pub a: f64,
    pub ell: f64,
    pub gamma: f64,
    pub sigma: i32,
    pub max_real_part: f64,
    pub unstable_count: usize,
    pub negative_count: usize,
    pub l_invertible: bool,
    pub krein_ok: bool,
}

/// Outcome of a boundary bisection.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryResult {
    /// Midpoint of the final bracket.
    pub critical_ell: f64,
    /// Final bracket; its endpoints straddle the classification change.
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// Leading-order prediction sqrt(a^2/12) for the gamma = 0 threshold.
    pub predictor: f64,
    /// |critical^2 - predictor^2| / predictor^2.
    pub relative_gap: f64,
}

/// Measured extent of an instability bubble, in ell^2, with its prediction.
#[derive(Debug, Clone)]
pub struct BubbleResult {
    pub ell_sq_lo: f64,
    pub ell_sq_hi: f64,
    pub center_ell_sq: f64,
    pub half_width_ell_sq: f64,
    pub prediction: BubblePrediction,
    pub center_rel_gap: f64,
    pub half_width_rel_gap: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma == 0.0 || (GAMMA_MIN..=0.5).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            requirement: "0 or within [0.05, 0.5]",
        })
    }
}

/// Fully classify one grid point: spectra, negative count and Krein audit
/// on the same matrices. Returns the record together with the spectrum
/// report backing it (eigenvalues of the gamma block union, at gamma != 0).
pub fn record_at(
    w: &Wave,
    sigma: i32,
    gamma: f64,
    ell: f64,
    n_trunc: usize,
    re_tol: f64,
) -> Result<(StabilityRecord, SpectrumReport)> {
    check_gamma(gamma)?;
    if ell <= 0.0 || !ell.is_finite() {
        return Err(Error::OutOfRange {
            name: "ell",
            value: ell,
            requirement: "positive and finite",
        });
    }
    let params = BlochParams::new(sigma, ell, gamma, n_trunc)?;
    let mut eigs = Vec::new();
    let mut l_eigs = Vec::new();
    let blocks = if gamma == 0.0 {
        vec![params]
    } else {
        vec![params, params.reflected()]
    };
    for p in &blocks {
        for (lambda, _) in eig_general(&build_a(w, p)?, DEFAULT_EIG_TOL)? {
            eigs.push(lambda);
        }
        l_eigs.extend(negative_count(&build_l(w, p)?, DEFAULT_INV_TOL)?.eigenvalues);
    }
    l_eigs.sort_by(|x, y| x.total_cmp(y));
    let sr = classify(&eigs, &params, re_tol);
    let nr = summarize_negative(l_eigs, params, DEFAULT_INV_TOL);
    let krein_ok = krein_audit(&sr, &nr)?;
    let record = StabilityRecord {
        a: w.a,
        ell,
        gamma,
        sigma,
        max_real_part: sr.max_real_part,
        unstable_count: sr.unstable_count,
        negative_count: nr.negative_count,
        l_invertible: nr.invertible,
        krein_ok,
    };
    Ok((record, sr))
}

/// Classify every point of the (gamma, ell) grid, gamma-major, in parallel.
pub fn scan(
    w: &Wave,
    sigma: i32,
    gamma_list: &[f64],
    ell_list: &[f64],
    n_trunc: usize,
    re_tol: f64,
) -> Result<Vec<StabilityRecord>> {
    for &g in gamma_list {
        check_gamma(g)?;
    }
    let grid: Vec<(f64, f64)> = gamma_list
        .iter()
        .flat_map(|&g| ell_list.iter().map(move |&l| (g, l)))
        .collect();
    grid.par_iter()
        .map(|&(gamma, ell)| record_at(w, sigma, gamma, ell, n_trunc, re_tol).map(|(r, _)| r))
        .collect()
}

fn unstable_at(w: &Wave, sigma: i32, gamma: f64, ell: f64, n_trunc: usize) -> Result<bool> {
    let (record, _) = record_at(w, sigma, gamma, ell, n_trunc, crate::spectra::DEFAULT_RE_TOL)?;
    Ok(record.unstable_count > 0)
}

/// Locate a stability boundary in ell by bisection on the indicator
/// "unstable_count > 0" at the default spectral resolution.
///
/// The predictor reported is the gamma = 0 long-wavelength threshold
/// sqrt(a^2/12), which is what the bracket is normally aimed at.
pub fn find_critical_ell(
    w: &Wave,
    sigma: i32,
    gamma: f64,
    bracket: (f64, f64),
    bisect_tol: f64,
) -> Result<BoundaryResult> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::OutOfRange {
            name: "bracket",
            value: lo,
            requirement: "0 < lo < hi",
        });
    }
    if bisect_tol <= 0.0 || bisect_tol.is_nan() {
        return Err(Error::OutOfRange {
            name: "bisect_tol",
            value: bisect_tol,
            requirement: "positive",
        });
    }
    let n_trunc = DEFAULT_SPECTRUM_N_TRUNC;
    let f_lo = unstable_at(w, sigma, gamma, lo, n_trunc)?;
    let f_hi = unstable_at(w, sigma, gamma, hi, n_trunc)?;
    if f_lo == f_hi {
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > bisect_tol {
        let mid = 0.5 * (lo + hi);
        if unstable_at(w, sigma, gamma, mid, n_trunc)? == f_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let critical_ell = 0.5 * (lo + hi);
    let predictor_sq = ell_a_sq(w.a);
    let predictor = predictor_sq.sqrt();
    let relative_gap = if predictor_sq > 0.0 {
        (critical_ell * critical_ell - predictor_sq).abs() / predictor_sq
    } else {
        f64::INFINITY
    };
    Ok(BoundaryResult {
        critical_ell,
        bracket: (lo, hi),
        iterations,
        predictor,
        relative_gap,
    })
}

/// Measure the KP-I instability bubble near the mode collision at the given
/// Floquet exponent.
///
/// A coarse walk over ell^2 around the predicted center finds unstable
/// points; both edges are then refined by bisection. The window is anchored
/// on the prediction and widened automatically if instability touches its
/// ends. Fails with BubbleNotFound when the coarse grid sees no instability
/// (too-coarse step or amplitude too small to resolve).
pub fn find_bubble(
    w: &Wave,
    sigma: i32,
    gamma: f64,
    coarse_step: f64,
) -> Result<BubbleResult> {
    if sigma != 1 {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma as f64,
            requirement: "+1 (the bubble analysis is specific to KP-I)",
        });
    }
    if !(GAMMA_MIN..=0.5).contains(&gamma) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            requirement: "within [0.05, 0.5]",
        });
    }
    if coarse_step <= 0.0 || coarse_step.is_nan() {
        return Err(Error::OutOfRange {
            name: "coarse_step",
            value: coarse_step,
            requirement: "positive",
        });
    }
    let n_trunc = DEFAULT_SPECTRUM_N_TRUNC;
    let prediction = BubblePrediction::bloch(gamma, w.a)?;
    let center = prediction.center_ell_sq;
    let mut half_window = (6.0 * prediction.half_width_ell_sq).max(4.0 * coarse_step);

    for _attempt in 0..4 {
        let lo_sq = (center - half_window).max(0.25 * center.min(coarse_step));
        let hi_sq = center + half_window;
        let steps = ((hi_sq - lo_sq) / coarse_step).ceil() as usize;
        let grid: Vec<f64> = (0..=steps)
            .map(|i| lo_sq + (hi_sq - lo_sq) * i as f64 / steps as f64)
            .collect();
        let flags = grid
            .par_iter()
            .map(|&s| unstable_at(w, sigma, gamma, s.sqrt(), n_trunc))
            .collect::<Result<Vec<bool>>>()?;
        let first = flags.iter().position(|&f| f);
        let Some(first) = first else {
            return Err(Error::BubbleNotFound {
                center_ell_sq: center,
                half_window,
            });
        };
        let last = flags.iter().rposition(|&f| f).unwrap();
        if first == 0 || last == flags.len() - 1 {
            // Instability reaches the window edge; look wider.
            half_window *= 2.0;
            continue;
        }

        let edge = |mut stable_sq: f64, mut unstable_sq: f64| -> Result<f64> {
            while (stable_sq - unstable_sq).abs() > EDGE_TOL_ELL_SQ {
                let mid = 0.5 * (stable_sq + unstable_sq);
                if unstable_at(w, sigma, gamma, mid.sqrt(), n_trunc)? {
                    unstable_sq = mid;
                } else {
                    stable_sq = mid;
                }
            }
            Ok(0.5 * (stable_sq + unstable_sq))
        };
        let ell_sq_lo = edge(grid[first - 1], grid[first])?;
        let ell_sq_hi = edge(grid[last + 1], grid[last])?;
        let measured_center = 0.5 * (ell_sq_lo + ell_sq_hi);
        let measured_half = 0.5 * (ell_sq_hi - ell_sq_lo);
        return Ok(BubbleResult {
            ell_sq_lo,
            ell_sq_hi,
            center_ell_sq: measured_center,
            half_width_ell_sq: measured_half,
            prediction,
            center_rel_gap: (measured_center - center).abs() / center,
            half_width_rel_gap: (measured_half - prediction.half_width_ell_sq).abs()
                / prediction.half_width_ell_sq,
        });
    }
    Err(Error::BubbleNotFound {
        center_ell_sq: center,
        half_window,
    })
}

/// Locate the KP-II collision of the dispersion branches of modes m and -p
/// by bisection on omega_m(ell) - omega_{-p}(ell), which increases in ell.
///
/// The special pair (1, 1) collides at ell = 0 and is returned exactly.
/// The result satisfies |ell^2 - ell_mp_sq(m, p)| well below 1e-6.
pub fn collision_locator(m: u32, p: u32, ell_bracket: (f64, f64), sigma: i32) -> Result<f64> {
    if sigma != -1 {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma as f64,
            requirement: "-1 (collisions are analyzed for KP-II)",
        });
    }
    if m < 1 || p < 1 {
        return Err(Error::OutOfRange {
            name: "m",
            value: m.min(p) as f64,
            requirement: "m, p >= 1",
        });
    }
    if m == 1 && p == 1 {
        return Ok(0.0);
    }
    let diff = |ell: f64| sym::omega(m as f64, -1.0, ell) - sym::omega(-(p as f64), -1.0, ell);
    let (mut lo, mut hi) = ell_bracket;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::OutOfRange {
            name: "ell_bracket",
            value: lo,
            requirement: "0 <= lo < hi",
        });
    }
    let d_lo = diff(lo);
    let d_hi = diff(hi);
    if d_lo == 0.0 {
        return Ok(lo);
    }
    if d_hi == 0.0 {
        return Ok(hi);
    }
    if d_lo.signum() == d_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if diff(mid).signum() == d_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let located = 0.5 * (lo + hi);
    debug_assert!((located * located - ell_mp_sq(m, p)).abs() <= 1e-6);
    Ok(located)
}

/// Sample the dispersion relation k -> (omega, mu) at fixed ell on a
/// uniform k grid. The grid must not contain or straddle 0, where the
/// symbols are singular.
pub fn dispersion_curve(
    sigma: i32,
    ell: f64,
    k_range: (f64, f64),
    samples: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    let (lo, hi) = k_range;
    if hi <= lo || hi.is_nan() || lo.is_nan() || lo == 0.0 || hi == 0.0 || (lo < 0.0 && hi > 0.0) {
        return Err(Error::OutOfRange {
            name: "k_range",
            value: lo,
            requirement: "lo < hi with 0 excluded",
        });
    }
    if samples < 2 {
        return Err(Error::OutOfRange {
            name: "samples",
            value: samples as f64,
            requirement: "at least 2",
        });
    }
    let sf = sigma as f64;
    Ok((0..samples)
        .map(|i| {
            let k = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            (k, sym::omega(k, sf, ell), sym::mu(k, sf, ell))
        })
        .collect())
}
