//! The family of small even periodic traveling waves.
//!
//! In the scaled frame the profile P and squared wavenumber k^2 solve
//! k^2 P'' + P + P^2/2 = 0 on 2 pi periodic even functions, one wave for
//! each amplitude a, where a is the cosine amplitude of mode 1. The solver
//! is a Newton iteration on the Galerkin system in cosine amplitudes, with
//! the second-order expansion
//!
//!   P_a = a cos z + a^2 (cos 2z / 3 - 1) / 4 + O(a^3),
//!   k_a^2 = 1 - 5 a^2 / 24 + O(a^4)
//!
//! as starting guess. Amplitudes are trusted up to |a| = 0.3; there the
//! iteration still contracts in one or two steps.

use ndarray::{Array1, Array2};
use ndarray_linalg::Solve;

use crate::error::{Error, Result};
use crate::fourier::{cosine_product, FourierCoeffs};

/// Largest amplitude the solver accepts.
pub const MAX_AMPLITUDE: f64 = 0.3;
/// Default cosine truncation order for wave solves.
pub const DEFAULT_N_TRUNC: usize = 32;
/// Default Newton residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_NEWTON_ITER: usize = 50;

/// A solved (or asymptotically approximated) periodic traveling wave.
#[derive(Debug, Clone)]
pub struct Wave {
    /// Amplitude parameter: the cosine amplitude of mode 1, exactly.
    pub a: f64,
    /// Squared wavenumber k_a^2 selected by the periodicity condition.
    pub k_sq: f64,
    /// Fourier coefficients of the profile (real and even).
    pub coeffs: FourierCoeffs,
    /// Cosine truncation order of the representation.
    pub n_trunc: usize,
    /// Sup norm of the Galerkin defect of (k^2 P'' + P + P^2/2) over the
    /// retained product modes.
    pub residual: f64,
}

impl Wave {
    /// Cosine amplitude of mode n (zero beyond the truncation).
    pub fn cosine(&self, n: usize) -> f64 {
        self.coeffs.cosine_amplitude(n)
    }

    /// Cosine amplitudes 0..=n_trunc as a plain vector.
    pub fn cosine_amplitudes(&self) -> Vec<f64> {
        (0..=self.n_trunc).map(|n| self.cosine(n)).collect()
    }
}

/// Galerkin defect of the profile equation on the cosine amplitudes `p`.
///
/// Row n is (1 - k^2 n^2) p_n + (P^2)_n / 2 for n = 0..=n_max; the product
/// amplitudes are exact, so this is the residual of the projected system.
fn galerkin_defect(p: &[f64], k_sq: f64, n_max: usize) -> Vec<f64> {
    let sq = cosine_product(p, p);
    (0..=n_max)
        .map(|n| {
            let pn = if n < p.len() { p[n] } else { 0.0 };
            let sn = if n < sq.len() { sq[n] } else { 0.0 };
            (1.0 - k_sq * (n * n) as f64) * pn + 0.5 * sn
        })
        .collect()
}

fn wave_from_amplitudes(a: f64, p: &[f64], k_sq: f64, residual: f64) -> Wave {
    Wave {
        a,
        k_sq,
        coeffs: FourierCoeffs::from_cosine(p),
        n_trunc: p.len() - 1,
        residual,
    }
}

/// The second-order small-amplitude wave, usable as a solver starting guess.
///
/// Coefficients are p_0 = -a^2/4, p_1 = a, p_2 = a^2/12 with
/// k^2 = 1 - 5 a^2/24; the stored residual is the measured Galerkin defect
/// of this truncation, which scales like |a|^3.
pub fn wave_asymptotic(a: f64) -> Wave {
    let p = [-a * a / 4.0, a, a * a / 12.0];
    let k_sq = 1.0 - 5.0 * a * a / 24.0;
    let defect = galerkin_defect(&p, k_sq, 4)
        .iter()
        .fold(0.0f64, |acc, g| acc.max(g.abs()));
    wave_from_amplitudes(a, &p, k_sq, defect)
}

/// Solve the periodic wave equations by Newton iteration.
///
/// Unknowns are the cosine amplitudes p_0..p_N together with k^2; the system
/// is the Galerkin projection of k^2 P'' + P + P^2/2 = 0 onto modes 0..=N
/// plus the normalization p_1 = a, which pins the amplitude exactly and
/// selects k^2. Converges when the sup norm of the projected equations
/// drops below `tol`.
///
/// Requires |a| <= 0.3, n_trunc >= 8 and tol > 0.
pub fn solve_wave(a: f64, n_trunc: usize, tol: f64) -> Result<Wave> {
    if !a.is_finite() || a.abs() > MAX_AMPLITUDE {
        return Err(Error::InvalidAmplitude {
            a,
            max: MAX_AMPLITUDE,
        });
    }
    if n_trunc < 8 {
        return Err(Error::OutOfRange {
            name: "n_trunc",
            value: n_trunc as f64,
            requirement: "n_trunc >= 8",
        });
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            requirement: "tol > 0",
        });
    }

    if a == 0.0 {
        let p = vec![0.0; n_trunc + 1];
        return Ok(wave_from_amplitudes(0.0, &p, 1.0, 0.0));
    }

    // Starting guess: the second-order wave padded with zeros.
    let guess = wave_asymptotic(a);
    let mut p = vec![0.0; n_trunc + 1];
    for (n, pn) in p.iter_mut().enumerate().take(3) {
        *pn = guess.cosine(n);
    }
    p[1] = a;
    let mut k_sq = guess.k_sq;

    let dim = n_trunc + 2;
    let mut residual = f64::INFINITY;
    for iter in 0..MAX_NEWTON_ITER {
        let defect = galerkin_defect(&p, k_sq, n_trunc);
        residual = defect.iter().fold(0.0f64, |acc, g| acc.max(g.abs()));
        if residual <= tol {
            return Ok(wave_from_amplitudes(a, &p, k_sq, residual));
        }

        // Assemble -F and the Jacobian. Rows 0..=N are the projected
        // equations, the last row is the constraint p_1 - a (already zero,
        // the update keeps it so).
        let mut rhs = Array1::<f64>::zeros(dim);
        for (n, g) in defect.iter().enumerate() {
            rhs[n] = -g;
        }
        let mut jac = Array2::<f64>::zeros((dim, dim));
        let mut unit = vec![0.0; n_trunc + 1];
        for m in 0..=n_trunc {
            unit[m] = 1.0;
            // d(P^2/2)/dp_m acts as multiplication by P on cos(m z).
            let col = cosine_product(&p, &unit);
            unit[m] = 0.0;
            for n in 0..=n_trunc {
                jac[[n, m]] = col[n];
            }
            jac[[m, m]] += 1.0 - k_sq * (m * m) as f64;
        }
        for n in 0..=n_trunc {
            jac[[n, n_trunc + 1]] = -((n * n) as f64) * p[n];
        }
        jac[[n_trunc + 1, 1]] = 1.0;

        let step = jac.solve(&rhs).map_err(|_| Error::NonConvergence {
            iterations: iter,
            residual,
        })?;
        for n in 0..=n_trunc {
            p[n] += step[n];
        }
        k_sq += step[n_trunc + 1];
        p[1] = a;
    }

    Err(Error::NonConvergence {
        iterations: MAX_NEWTON_ITER,
        residual,
    })
}

/// Evaluate the wave profile at z.
pub fn eval_wave(w: &Wave, z: f64) -> f64 {
    let mut sum = w.cosine(0);
    for n in 1..=w.n_trunc {
        sum += w.cosine(n) * (n as f64 * z).cos();
    }
    sum
}

/// Sup norm of k^2 P'' + P + P^2/2 sampled on a uniform grid of `grid_size`
/// points over one period. Requires grid_size >= 4 n_trunc so the quadrature
/// resolves the square.
pub fn ode_residual(w: &Wave, grid_size: usize) -> f64 {
    assert!(
        grid_size >= 4 * w.n_trunc.max(1),
        "grid_size must be at least 4 n_trunc"
    );
    let mut worst = 0.0f64;
    for j in 0..grid_size {
        let z = 2.0 * std::f64::consts::PI * j as f64 / grid_size as f64;
        let mut val = w.cosine(0);
        let mut dd = 0.0;
        for n in 1..=w.n_trunc {
            let c = (n as f64 * z).cos();
            let amp = w.cosine(n);
            val += amp * c;
            dd -= (n * n) as f64 * amp * c;
        }
        worst = worst.max((w.k_sq * dd + val + 0.5 * val * val).abs());
    }
    worst
}
