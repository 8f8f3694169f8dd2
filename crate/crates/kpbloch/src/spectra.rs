//! Eigenvalue computation, stability classification and the counting audits.
//!
//! Dense spectra come from LAPACK (zgeev for general matrices, zheev for the
//! Hermitian L blocks); every returned pair is checked against the residual
//! bound ||M v - lambda v|| <= tol ||M||_F ||v||, so a contract violation
//! surfaces as an error instead of a silently wrong spectrum.

use ndarray::Array1;
use ndarray_linalg::{Eig, Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{build_a, BlochParams, OperatorKind, OperatorMatrix};
use crate::waves::Wave;

/// Real parts above this count as unstable.
pub const DEFAULT_RE_TOL: f64 = 1e-8;
/// Eigenvalues of L within this of zero make L non-invertible.
pub const DEFAULT_INV_TOL: f64 = 1e-6;
/// Relative eigenpair residual bound for the dense solvers.
pub const DEFAULT_EIG_TOL: f64 = 1e-10;
/// Entrywise Hermiticity tolerance for L matrices.
pub const HERMITICITY_TOL: f64 = 1e-13;

/// Stability classification of one computed spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    /// Number of eigenvalues with Re > re_tol.
    pub unstable_count: usize,
    /// Worst distance from -conj(lambda) to the eigenvalue set; small values
    /// certify symmetry with respect to the imaginary axis.
    pub symmetry_residual_imag_axis: f64,
    /// Same against conj(lambda); only meaningful (and only reported) at
    /// gamma = 0, where the spectrum is symmetric about the real axis too.
    pub symmetry_residual_real_axis: Option<f64>,
    pub params: BlochParams,
    pub re_tol: f64,
}

impl SpectrumReport {
    /// Number of eigenvalues with |Re| > re_tol. Under imaginary-axis
    /// symmetry these come in opposite-real-part pairs, so the count is
    /// even whenever the symmetry residual is below re_tol.
    pub fn off_axis_count(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|z| z.re.abs() > self.re_tol)
            .count()
    }
}

/// Negative-direction count of a self-adjoint L block.
#[derive(Debug, Clone)]
pub struct NegativeCountReport {
    /// Real eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Number of eigenvalues below -inv_tol.
    pub negative_count: usize,
    pub min_abs_eigenvalue: f64,
    /// True when no eigenvalue lies within inv_tol of zero.
    pub invertible: bool,
    pub params: BlochParams,
    pub inv_tol: f64,
}

fn vec_norm(v: &Array1<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues and eigenvectors of a general dense matrix.
///
/// Every pair satisfies ||M v - lambda v||_2 <= tol ||M||_F ||v||_2; the
/// count equals the dimension, with multiplicity. Ordering follows the
/// underlying solver and is not specified.
pub fn eig_general(
    m: &OperatorMatrix,
    tol: f64,
) -> Result<Vec<(Complex64, Array1<Complex64>)>> {
    let (vals, vecs) = m
        .entries
        .eig()
        .map_err(|e| Error::NoConvergence(format!("dense eigensolver: {e}")))?;
    let scale = m.frobenius_norm();
    let mut out = Vec::with_capacity(m.dim);
    for (j, &lambda) in vals.iter().enumerate() {
        let v = vecs.column(j).to_owned();
        let mut resid = m.entries.dot(&v);
        resid.iter_mut().zip(v.iter()).for_each(|(r, &c)| *r -= lambda * c);
        let bound = tol * scale * vec_norm(&v);
        let r = vec_norm(&resid);
        if r > bound {
            return Err(Error::NoConvergence(format!(
                "eigenpair {j} residual {r:.3e} exceeds bound {bound:.3e}"
            )));
        }
        out.push((lambda, v));
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending, with the same residual
/// contract as `eig_general`.
pub fn eig_hermitian(m: &OperatorMatrix) -> Result<Vec<f64>> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation: defect,
            tol: HERMITICITY_TOL,
        });
    }
    let (vals, vecs) = m
        .entries
        .eigh(UPLO::Lower)
        .map_err(|e| Error::NoConvergence(format!("hermitian eigensolver: {e}")))?;
    let scale = m.frobenius_norm();
    for (j, &lambda) in vals.iter().enumerate() {
        let v = vecs.column(j).to_owned();
        let mut resid = m.entries.dot(&v);
        resid
            .iter_mut()
            .zip(v.iter())
            .for_each(|(r, &c)| *r -= Complex64::new(lambda, 0.0) * c);
        let bound = DEFAULT_EIG_TOL * scale * vec_norm(&v);
        if vec_norm(&resid) > bound {
            return Err(Error::NoConvergence(format!(
                "hermitian eigenpair {j} residual exceeds bound {bound:.3e}"
            )));
        }
    }
    Ok(vals.to_vec())
}

fn nearest_distance(target: Complex64, set: &[Complex64]) -> f64 {
    set.iter()
        .map(|&z| (z - target).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Classify a computed spectrum against the stability tolerance.
///
/// `unstable_count` counts eigenvalues with Re > re_tol. The symmetry
/// residuals measure how far the set is from being invariant under
/// lambda -> -conj(lambda) (imaginary axis) and, at gamma = 0 where it
/// applies, lambda -> conj(lambda) (real axis), using nearest-neighbor
/// matching.
pub fn classify(eigs: &[Complex64], p: &BlochParams, re_tol: f64) -> SpectrumReport {
    assert!(re_tol > 0.0, "re_tol must be positive");
    let max_real_part = if eigs.is_empty() {
        0.0
    } else {
        eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    };
    let unstable_count = eigs.iter().filter(|z| z.re > re_tol).count();
    let imag_axis = eigs
        .iter()
        .map(|&z| nearest_distance(-z.conj(), eigs))
        .fold(0.0f64, f64::max);
    let real_axis = (p.gamma == 0.0).then(|| {
        eigs.iter()
            .map(|&z| nearest_distance(z.conj(), eigs))
            .fold(0.0f64, f64::max)
    });
    SpectrumReport {
        eigenvalues: eigs.to_vec(),
        max_real_part,
        unstable_count,
        symmetry_residual_imag_axis: imag_axis,
        symmetry_residual_real_axis: real_axis,
        params: *p,
        re_tol,
    }
}

/// Count negative directions of a self-adjoint L block.
pub fn negative_count(m: &OperatorMatrix, inv_tol: f64) -> Result<NegativeCountReport> {
    if inv_tol <= 0.0 || inv_tol.is_nan() {
        return Err(Error::OutOfRange {
            name: "inv_tol",
            value: inv_tol,
            requirement: "positive",
        });
    }
    let eigenvalues = eig_hermitian(m)?;
    Ok(summarize_negative(eigenvalues, m.params, inv_tol))
}

pub(crate) fn summarize_negative(
    eigenvalues: Vec<f64>,
    params: BlochParams,
    inv_tol: f64,
) -> NegativeCountReport {
    let negative_count = eigenvalues.iter().filter(|&&v| v < -inv_tol).count();
    let min_abs_eigenvalue = eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    NegativeCountReport {
        invertible: min_abs_eigenvalue > inv_tol,
        eigenvalues,
        negative_count,
        min_abs_eigenvalue,
        inv_tol,
        params,
    }
}

/// Check the counting inequality k_u <= n(L) on a matched pair of reports.
///
/// Vacuously true when L is not invertible (the inequality is only asserted
/// away from the kernel); a false return indicates an implementation bug,
/// not a feature of the problem.
pub fn krein_audit(sr: &SpectrumReport, nr: &NegativeCountReport) -> Result<bool> {
    if sr.params != nr.params {
        return Err(Error::ParamMismatch);
    }
    Ok(!nr.invertible || sr.unstable_count <= nr.negative_count)
}

/// Relative residual of the translation-invariance identity A (dP/dz) = 0
/// at ell = 0 on the zero-mean modes. Returns 0 for the zero wave.
///
/// The identity is exact in the continuum; the discrete value is bounded by
/// the convolution tail the truncation discards, far below 1e-8 at the
/// default resolutions.
pub fn translation_kernel_check(w: &Wave, n_trunc: usize) -> Result<f64> {
    let p = BlochParams::new(1, 0.0, 0.0, n_trunc)?;
    let a = build_a(w, &p)?;
    debug_assert_eq!(a.kind, OperatorKind::A);
    let d = w.coeffs.derivative();
    let v: Array1<Complex64> = a.basis_modes.iter().map(|&m| d.get(m)).collect();
    let norm = vec_norm(&v);
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(vec_norm(&a.entries.dot(&v)) / norm)
}
