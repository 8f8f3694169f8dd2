//! The one-shot verification suite.
//!
//! Eleven end-to-end checks pin the library to its measured behavior: wave
//! accuracy against the second-order expansion, the translation kernel, the
//! KP-I long-wavelength threshold and Bloch bubble against their closed-form
//! predictors, the counting inequality, spectral symmetries, the operator
//! factorization, KP-II long-wavelength stability and collisions, truncation
//! convergence, and the unperturbed-spectrum oracle. Expected values and
//! tolerances are embedded here as code; `quick` shrinks grid sizes and
//! sample counts without loosening any tolerance.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymptotics::{ell_a_sq, ell_minus_sq, ell_mp_sq, eps_a, omega_n, BubblePrediction};
use crate::error::{Error, Result};
use crate::operators::{build_a, build_l, build_m, BlochParams};
use crate::scanner::{
    collision_locator, find_bubble, find_critical_ell, record_at, StabilityRecord,
};
use crate::spectra::{eig_general, eig_hermitian, SpectrumReport, DEFAULT_EIG_TOL, DEFAULT_RE_TOL};
use crate::waves::solve_wave;

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    /// The one-line form printed by the acceptance runner.
    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Shared pool of everything the grid criteria computed, reused by the
/// cross-cutting audits (Krein at every point, symmetry residuals of every
/// spectrum).
#[derive(Default)]
struct Audit {
    records: Vec<StabilityRecord>,
    worst_imag: f64,
    worst_real: f64,
    spectra: usize,
}

impl Audit {
    fn push(&mut self, record: StabilityRecord, report: &SpectrumReport) {
        self.records.push(record);
        self.worst_imag = self.worst_imag.max(report.symmetry_residual_imag_axis);
        if let Some(r) = report.symmetry_residual_real_axis {
            self.worst_real = self.worst_real.max(r);
        }
        self.spectra += 1;
    }

    fn push_all(&mut self, batch: Vec<(StabilityRecord, SpectrumReport)>) {
        for (rec, rep) in batch {
            self.push(rec, &rep);
        }
    }
}

/// Deterministic sample-point generator (splitmix64). The suite draws its
/// "random" parameters from a fixed seed so reruns are bit-reproducible.
struct SampleGen(u64);

impl SampleGen {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

const SUITE_SEED: u64 = 0x6b70_626c_6f63_6801;

fn guard(name: &'static str, result: Result<(bool, String)>) -> Criterion {
    match result {
        Ok((passed, detail)) => Criterion {
            name,
            passed,
            detail,
        },
        Err(e) => Criterion {
            name,
            passed: false,
            detail: format!("aborted: {e}"),
        },
    }
}

/// Run the full verification suite; `quick` reduces grid resolution and
/// sample counts but keeps every tolerance.
pub fn run_all(quick: bool) -> Vec<Criterion> {
    let mut audit = Audit::default();
    let c1 = guard("wave-accuracy", wave_accuracy());
    let c2 = guard("translation-kernel", translation_kernel());
    let c3 = guard("kpi-periodic-threshold", kpi_threshold(quick, &mut audit));
    let c4 = guard("kpi-bloch-bubble", kpi_bubble(quick, &mut audit));
    let c7 = guard("factorization-identity", factorization(quick));
    let c8 = guard("kpii-long-wave-stability", kpii_long_wave(&mut audit));
    let c9 = guard("kpii-collisions", kpii_collisions());
    let c10 = guard("truncation-convergence", truncation(quick));
    let c11 = guard("unperturbed-spectrum-oracle", unperturbed_oracle(quick));
    // The cross-cutting audits run last so they see every grid spectrum.
    let c5 = guard("krein-inequality", krein(quick, &audit));
    let c6 = guard("spectral-symmetries", symmetries(quick, &audit));
    vec![c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11]
}

/// True when every criterion passed.
pub fn all_passed(criteria: &[Criterion]) -> bool {
    criteria.iter().all(|c| c.passed)
}

fn wave_accuracy() -> Result<(bool, String)> {
    let mut passed = true;
    let mut detail = String::new();
    for &a in &[0.05, 0.1, 0.2] {
        let w = solve_wave(a, 32, 1e-12)?;
        let k_gap = (w.k_sq - (1.0 - 5.0 * a * a / 24.0)).abs();
        let p2_gap = (w.cosine(2) - a * a / 12.0).abs();
        let k_tol = 2.0 * a.powi(4);
        let p2_tol = 2.0 * a.powi(4) + 1e-12;
        passed &= k_gap <= k_tol && p2_gap <= p2_tol && w.residual <= 1e-10;
        let _ = write!(
            detail,
            "a={a}: |dk2|={k_gap:.2e} (tol {k_tol:.2e}), |dp2|={p2_gap:.2e}, res={:.1e}; ",
            w.residual
        );
    }
    Ok((passed, detail))
}

fn translation_kernel() -> Result<(bool, String)> {
    let mut passed = true;
    let mut detail = String::new();
    for &(a, n) in &[(0.1, 32usize), (0.2, 48)] {
        let w = solve_wave(a, n, 1e-12)?;
        let r = crate::spectra::translation_kernel_check(&w, n)?;
        passed &= r <= 1e-8;
        let _ = write!(detail, "a={a} N={n}: residual {r:.2e} <= 1e-8; ");
    }
    Ok((passed, detail))
}

fn kpi_threshold(quick: bool, audit: &mut Audit) -> Result<(bool, String)> {
    let a = 0.1;
    let n = 48;
    let w = solve_wave(a, n, 1e-12)?;
    let mut passed = true;
    let mut detail = String::new();

    let boundary = find_critical_ell(&w, 1, 0.0, (0.005, 0.1), 1e-6)?;
    passed &= boundary.relative_gap <= 0.05;
    let _ = write!(
        detail,
        "ell*={:.6} gap={:.3}; ",
        boundary.critical_ell, boundary.relative_gap
    );

    for &ell in &[0.1, 0.5, 1.0, 2.0] {
        let (rec, rep) = record_at(&w, 1, 0.0, ell, n, DEFAULT_RE_TOL)?;
        passed &= rec.max_real_part <= 1e-8;
        audit.push(rec, &rep);
    }

    let peak_ell = (a * a / 24.0).sqrt();
    let (rec, rep) = record_at(&w, 1, 0.0, peak_ell, n, DEFAULT_RE_TOL)?;
    let target = a * a / 24.0;
    let top = rep
        .eigenvalues
        .iter()
        .cloned()
        .max_by(|x, y| x.re.total_cmp(&y.re))
        .unwrap();
    passed &= rec.unstable_count == 1
        && top.im.abs() <= 1e-8
        && (top.re - target).abs() / target <= 0.10;
    let _ = write!(
        detail,
        "peak Re={:.4e} vs {target:.4e}, Im={:.1e}, k_u={}; ",
        top.re, top.im, rec.unstable_count
    );
    audit.push(rec, &rep);

    // Dense ell sweep kept for the Krein and symmetry audits.
    let grid_n = if quick { 40 } else { 100 };
    let batch: Vec<_> = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let ell = 0.01 + (2.0 - 0.01) * i as f64 / (grid_n - 1) as f64;
            record_at(&w, 1, 0.0, ell, n, DEFAULT_RE_TOL)
        })
        .collect::<Result<_>>()?;
    audit.push_all(batch);
    let _ = write!(detail, "{grid_n} sweep points audited");
    Ok((passed, detail))
}

fn kpi_bubble(quick: bool, audit: &mut Audit) -> Result<(bool, String)> {
    let a = 0.05;
    let n = 48;
    let w = solve_wave(a, n, 1e-12)?;
    let mut passed = true;
    let mut detail = String::new();

    for &gamma in &[0.25, 0.5] {
        let eps = eps_a(gamma, a)?;
        let step = eps / if quick { 4.0 } else { 8.0 };
        let bubble = find_bubble(&w, 1, gamma, step)?;
        passed &= bubble.center_rel_gap <= 0.02;
        if gamma == 0.25 {
            passed &= bubble.half_width_rel_gap <= 0.15;
        }
        let _ = write!(
            detail,
            "g={gamma}: center={:.6e} (gap {:.4}), half={:.3e} (gap {:.3}); ",
            bubble.center_ell_sq,
            bubble.center_rel_gap,
            bubble.half_width_ell_sq,
            bubble.half_width_rel_gap
        );

        // Inside: an aggregated pair with opposite real parts.
        let (rec, rep) = record_at(&w, 1, gamma, bubble.center_ell_sq.sqrt(), n, DEFAULT_RE_TOL)?;
        let max_re = rep.max_real_part;
        let min_re = rep
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min);
        passed &= rec.unstable_count == 2 && (max_re + min_re).abs() <= 1e-8;
        audit.push(rec, &rep);

        // Outside: stable everywhere on (0, ell_-^2 + 0.05], skipping the
        // measured bubble plus a small safety margin.
        let hi = ell_minus_sq(gamma)? + 0.05;
        let margin = 1e-5;
        let grid_n = if quick { 24 } else { 60 };
        let points: Vec<f64> = (0..grid_n)
            .map(|i| 0.004 + (hi - 0.004) * i as f64 / (grid_n - 1) as f64)
            .filter(|&s| s < bubble.ell_sq_lo - margin || s > bubble.ell_sq_hi + margin)
            .collect();
        let batch: Vec<_> = points
            .par_iter()
            .map(|&s| record_at(&w, 1, gamma, s.sqrt(), n, DEFAULT_RE_TOL))
            .collect::<Result<_>>()?;
        let worst_outside = batch
            .iter()
            .map(|(r, _)| r.max_real_part)
            .fold(0.0f64, f64::max);
        passed &= worst_outside <= 1e-8;
        let _ = write!(
            detail,
            "outside {} pts max_re={worst_outside:.1e}; ",
            batch.len()
        );
        audit.push_all(batch);
    }
    Ok((passed, detail))
}

fn krein(quick: bool, audit: &Audit) -> Result<(bool, String)> {
    let total = audit.records.len();
    let invertible = audit.records.iter().filter(|r| r.l_invertible).count();
    let violations = audit.records.iter().filter(|r| !r.krein_ok).count();
    let enough = quick || total >= 200;
    Ok((
        violations == 0 && enough,
        format!(
            "{total} records ({invertible} invertible, {} vacuous), {violations} violations",
            total - invertible
        ),
    ))
}

fn symmetries(quick: bool, audit: &Audit) -> Result<(bool, String)> {
    let mut passed = audit.worst_imag <= 1e-8 && audit.worst_real <= 1e-8;
    let mut detail = format!(
        "{} spectra: imag-axis {:.1e}, real-axis {:.1e}; ",
        audit.spectra, audit.worst_imag, audit.worst_real
    );

    // Reflection pairing: the spectrum at -gamma is the negation of the
    // spectrum at +gamma.
    let mut gen = SampleGen(SUITE_SEED);
    let draws = if quick { 6 } else { 20 };
    let mut worst = 0.0f64;
    for i in 0..draws {
        let a = gen.range(0.02, 0.2);
        let ell = gen.range(0.05, 1.5);
        let gamma = gen.range(crate::scanner::GAMMA_MIN, 0.5);
        let sigma = if i % 2 == 0 { 1 } else { -1 };
        let w = solve_wave(a, 32, 1e-12)?;
        let p = BlochParams::new(sigma, ell, gamma, 32)?;
        let plus: Vec<Complex64> = eig_general(&build_a(&w, &p)?, DEFAULT_EIG_TOL)?
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        let minus: Vec<Complex64> = eig_general(&build_a(&w, &p.reflected())?, DEFAULT_EIG_TOL)?
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        let res = plus
            .iter()
            .map(|&l| {
                minus
                    .iter()
                    .map(|&m| (m + l).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max);
        worst = worst.max(res);
    }
    passed &= worst <= 1e-8;
    let _ = write!(detail, "reflection worst {worst:.1e} over {draws} draws");
    Ok((passed, detail))
}

fn factorization(quick: bool) -> Result<(bool, String)> {
    let w = solve_wave(0.1, 48, 1e-12)?;
    let p = BlochParams::new(1, 0.3, 0.25, 48)?;
    let a = build_a(&w, &p)?;
    let mut gen = SampleGen(SUITE_SEED ^ 7);
    let draws = if quick { 4 } else { 10 };
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let lambda = Complex64::new(gen.range(-2.0, 2.0), gen.range(-2.0, 2.0));
        let m = build_m(&w, &p, lambda)?;
        // Independent product K (lambda I - A) assembled entry by entry.
        for (i, &mode) in a.basis_modes.iter().enumerate() {
            let k = Complex64::new(0.0, mode as f64 + p.gamma);
            for j in 0..a.dim {
                let shifted = if i == j {
                    lambda - a.entries[[i, j]]
                } else {
                    -a.entries[[i, j]]
                };
                worst = worst.max((m.entries[[i, j]] - k * shifted).norm());
            }
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max entrywise defect {worst:.2e} over {draws} draws"),
    ))
}

fn kpii_long_wave(audit: &mut Audit) -> Result<(bool, String)> {
    let w = solve_wave(0.1, 48, 1e-12)?;
    let mut passed = true;
    let mut worst = 0.0f64;
    for &ell in &[0.005, 0.01, 0.02, 0.05] {
        let (rec, rep) = record_at(&w, -1, 0.0, ell, 48, DEFAULT_RE_TOL)?;
        worst = worst.max(rec.max_real_part);
        passed &= rec.max_real_part <= 1e-8;
        audit.push(rec, &rep);
    }
    let outcome = find_critical_ell(&w, -1, 0.0, (0.005, 0.05), 1e-6);
    let no_sign_change = matches!(outcome, Err(Error::NoSignChange { .. }));
    passed &= no_sign_change;
    Ok((
        passed,
        format!("max_re {worst:.1e} over 4 points; boundary search sign change: {no_sign_change}"),
    ))
}

fn kpii_collisions() -> Result<(bool, String)> {
    let w0 = solve_wave(0.0, 48, 1e-12)?;
    let mut passed = true;
    let mut detail = String::new();
    for &(m, p, target_sq) in &[(2u32, 1u32, 4.0f64), (3, 1, 18.0), (2, 2, 12.0)] {
        let target = target_sq.sqrt();
        let located = collision_locator(m, p, (0.5 * target, 1.5 * target), -1)?;
        passed &= (located - target).abs() <= 1e-6
            && (located * located - ell_mp_sq(m, p)).abs() <= 1e-6;

        let params = BlochParams::new(-1, located, 0.0, 48)?;
        let eigs: Vec<Complex64> = eig_general(&build_a(&w0, &params)?, DEFAULT_EIG_TOL)?
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        let near = |target: Complex64| {
            eigs.iter()
                .cloned()
                .min_by(|x, y| (x - target).norm().total_cmp(&(y - target).norm()))
                .unwrap()
        };
        let lam_m = near(Complex64::new(0.0, omega_n(m as i64, &params)?));
        let lam_p = near(Complex64::new(0.0, omega_n(-(p as i64), &params)?));
        let gap = (lam_m - lam_p).norm();
        passed &= gap <= 1e-8;
        let _ = write!(detail, "({m},{p}): ell={located:.6} gap={gap:.1e}; ");
    }
    Ok((passed, detail))
}

fn truncation(quick: bool) -> Result<(bool, String)> {
    let bubble_center = |gamma: f64| -> Result<f64> {
        Ok(BubblePrediction::bloch(gamma, 0.05)?.center_ell_sq.sqrt())
    };
    let mut points: Vec<(f64, i32, f64, f64)> = vec![
        (0.1, 1, 0.0, ell_a_sq(0.1).sqrt()),
        (0.1, 1, 0.0, 0.1),
        (0.1, 1, 0.0, 0.5),
        (0.1, 1, 0.0, 2.0),
    ];
    if !quick {
        points.extend([
            (0.05, 1, 0.25, bubble_center(0.25)?),
            (0.05, 1, 0.25, 0.3),
            (0.05, 1, 0.5, bubble_center(0.5)?),
            (0.1, -1, 0.0, 0.05),
            (0.1, -1, 0.0, 2.0),
            (0.2, 1, 0.0, 0.03),
        ]);
    }
    let mut worst = 0.0f64;
    for &(a, sigma, gamma, ell) in &points {
        let w48 = solve_wave(a, 48, 1e-12)?;
        let w64 = solve_wave(a, 64, 1e-12)?;
        let spec = |w: &crate::waves::Wave, n: usize| -> Result<Vec<Complex64>> {
            let p = BlochParams::new(sigma, ell, gamma, n)?;
            Ok(eig_general(&build_a(w, &p)?, DEFAULT_EIG_TOL)?
                .into_iter()
                .map(|(l, _)| l)
                .collect())
        };
        let coarse = spec(&w48, 48)?;
        let fine = spec(&w64, 64)?;
        for lam in coarse.iter().filter(|l| l.norm() <= 10.0) {
            let d = fine
                .iter()
                .map(|f| (f - lam).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    Ok((
        worst <= 1e-8,
        format!(
            "worst movement {worst:.2e} over {} points (N=48 vs 64)",
            points.len()
        ),
    ))
}

fn unperturbed_oracle(quick: bool) -> Result<(bool, String)> {
    let w0 = solve_wave(0.0, 48, 1e-12)?;
    let gammas = [0.0, 0.25, -0.37, 0.5, 0.11];
    let mut gen = SampleGen(SUITE_SEED ^ 11);
    let draws = if quick { 3 } else { 5 };
    let mut worst_a = 0.0f64;
    let mut worst_l = 0.0f64;
    for (i, &gamma) in gammas.iter().take(draws).enumerate() {
        let sigma = if i % 2 == 0 { 1 } else { -1 };
        let ell = gen.range(0.05, 2.0);
        let p = BlochParams::new(sigma, ell, gamma, 48)?;
        let predicted: Vec<Complex64> = p
            .basis_modes()
            .iter()
            .map(|&n| Ok(Complex64::new(0.0, omega_n(n, &p)?)))
            .collect::<Result<_>>()?;
        let computed: Vec<Complex64> = eig_general(&build_a(&w0, &p)?, DEFAULT_EIG_TOL)?
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        for set in [(&predicted, &computed), (&computed, &predicted)] {
            for z in set.0 {
                let d = set
                    .1
                    .iter()
                    .map(|c| (c - z).norm())
                    .fold(f64::INFINITY, f64::min);
                worst_a = worst_a.max(d);
            }
        }

        let mut mus: Vec<f64> = p
            .basis_modes()
            .iter()
            .map(|&n| crate::asymptotics::mu_n(n, &p))
            .collect::<Result<_>>()?;
        mus.sort_by(|x, y| x.total_cmp(y));
        let vals = eig_hermitian(&build_l(&w0, &p)?)?;
        for (v, m) in vals.iter().zip(mus.iter()) {
            worst_l = worst_l.max((v - m).abs());
        }
    }
    Ok((
        worst_a <= 1e-12 && worst_l <= 1e-12,
        format!("A defect {worst_a:.2e}, L defect {worst_l:.2e} over {draws} draws"),
    ))
}
