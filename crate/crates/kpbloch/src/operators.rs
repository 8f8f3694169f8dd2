//! Dense Fourier-space assembly of the linearized operators.
//!
//! Transverse perturbations of a wave P with transverse wavenumber ell and
//! Floquet exponent gamma lead, mode by mode, to the operators
//!
//!   L = -(d/dz + i gamma)^2 - (1/k^2)((1+P) .) - sigma ell^2 (d/dz + i gamma)^{-2},
//!   A = -(d/dz + i gamma) L,
//!   M(lambda) = (d/dz + i gamma)(lambda - A),
//!
//! truncated to the Fourier modes |n| <= N. With x = n + gamma the entry
//! formulas are
//!
//!   L(m,n) = delta_mn [x_n^2 + sigma ell^2 / x_n^2] - q_{m-n} / k^2,
//!   A(m,n) = i x_m q_{m-n} / k^2 + delta_mn [-i x_n^3 - i sigma ell^2 / x_n],
//!
//! where q are the Fourier coefficients of 1 + P. At gamma = 0 the mode
//! n = 0 is removed (the zero-mean subspace, on which the antiderivative is
//! well defined); for gamma != 0 every mode is kept since x never vanishes.
//!
//! A is assembled as -K L and M as K(lambda I - A), with K the diagonal
//! i(n + gamma), so the decomposition and factorization identities hold at
//! working precision by construction, while both identities are verified
//! against the direct symbol formulas in the tests.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::FourierCoeffs;
use crate::sym;
use crate::waves::Wave;

/// Parameters of a Floquet-Bloch operator block.
///
/// `sigma` selects the dispersion sign (+1 for KP-I, -1 for KP-II), `ell` is
/// the transverse wavenumber, `gamma` the Floquet exponent and `n_trunc` the
/// Galerkin truncation order. `zero_mean` records whether mode 0 is removed;
/// the constructor sets it exactly when gamma = 0.
///
/// gamma = -1/2 is accepted as an alias of +1/2: shifting every mode index
/// by one carries one basis onto the other, so the two blocks are unitarily
/// equivalent. ell = 0 is allowed and gives the purely longitudinal
/// operators used by the translation-kernel check; stability scans use
/// ell > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    pub sigma: i32,
    pub ell: f64,
    pub gamma: f64,
    pub n_trunc: usize,
    pub zero_mean: bool,
}

impl BlochParams {
    /// Validate parameters and derive the zero-mean flag from gamma.
    pub fn new(sigma: i32, ell: f64, gamma: f64, n_trunc: usize) -> Result<Self> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::OutOfRange {
                name: "sigma",
                value: sigma as f64,
                requirement: "+1 (KP-I) or -1 (KP-II)",
            });
        }
        if !ell.is_finite() || ell < 0.0 {
            return Err(Error::OutOfRange {
                name: "ell",
                value: ell,
                requirement: "finite and >= 0",
            });
        }
        if !gamma.is_finite() || !(-0.5..=0.5).contains(&gamma) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: gamma,
                requirement: "within [-1/2, 1/2]",
            });
        }
        if n_trunc < 1 {
            return Err(Error::OutOfRange {
                name: "n_trunc",
                value: n_trunc as f64,
                requirement: "at least 1",
            });
        }
        Ok(Self {
            sigma,
            ell,
            gamma,
            n_trunc,
            zero_mean: gamma == 0.0,
        })
    }

    /// The retained Fourier modes, ascending; mode 0 is dropped on the
    /// zero-mean subspace.
    pub fn basis_modes(&self) -> Vec<i64> {
        let n = self.n_trunc as i64;
        (-n..=n)
            .filter(|&m| !(self.zero_mean && m == 0))
            .collect()
    }

    /// Matrix dimension: 2N on the zero-mean subspace, 2N+1 otherwise.
    pub fn dim(&self) -> usize {
        2 * self.n_trunc + usize::from(!self.zero_mean)
    }

    /// The Floquet partner with gamma negated (spectra negate under this).
    pub fn reflected(&self) -> Self {
        Self {
            gamma: -self.gamma,
            ..*self
        }
    }

    pub(crate) fn sigma_f(&self) -> f64 {
        self.sigma as f64
    }
}

/// Which operator a matrix represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    A,
    L,
    M,
}

/// A dense truncated operator together with the data that produced it.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub dim: usize,
    pub basis_modes: Vec<i64>,
    pub entries: Array2<Complex64>,
    pub params: BlochParams,
    /// The spectral parameter, present exactly for kind M.
    pub lambda: Option<Complex64>,
}

impl OperatorMatrix {
    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..=i {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Frobenius norm of the entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Toeplitz matrix of multiplication by 1 + f on the given modes: entry
/// (m, n) is q_{m-n} with q_0 = 1 + c_0 and q_j = c_j otherwise.
/// Coefficients of f outside its stored range count as zero, so the matrix
/// is the Galerkin compression of the multiplication operator. Hermitian
/// whenever f is real.
pub fn convolution_matrix(f: &FourierCoeffs, basis_modes: &[i64]) -> Array2<Complex64> {
    let dim = basis_modes.len();
    let mut out = Array2::zeros((dim, dim));
    for (i, &m) in basis_modes.iter().enumerate() {
        for (j, &n) in basis_modes.iter().enumerate() {
            let mut q = f.get(m - n);
            if m == n {
                q += 1.0;
            }
            out[[i, j]] = q;
        }
    }
    out
}

fn check_modes(p: &BlochParams) -> Result<Vec<i64>> {
    let modes = p.basis_modes();
    for &m in &modes {
        if m as f64 + p.gamma == 0.0 {
            return Err(Error::SingularSymbol {
                mode: m,
                gamma: p.gamma,
            });
        }
    }
    Ok(modes)
}

/// Assemble the self-adjoint factor L.
///
/// Diagonal entries are mu(x) + (1 - q_0/k^2) with
/// mu(x) = x^2 - 1 + sigma ell^2 / x^2, which keeps the a = 0 diagonal
/// bit-identical to the closed-form symbol; off-diagonal entries are
/// -q_{m-n}/k^2.
pub fn build_l(w: &Wave, p: &BlochParams) -> Result<OperatorMatrix> {
    let modes = check_modes(p)?;
    let dim = modes.len();
    let k_sq = w.k_sq;
    // 1 - q_0 / k^2 vanishes exactly at a = 0 where q_0 = k^2 = 1.
    let q0 = Complex64::new(1.0, 0.0) + w.coeffs.get(0);
    let shift = Complex64::new(1.0, 0.0) - q0 / k_sq;
    let mut entries = Array2::zeros((dim, dim));
    for (i, &m) in modes.iter().enumerate() {
        for (j, &n) in modes.iter().enumerate() {
            entries[[i, j]] = if m == n {
                let x = n as f64 + p.gamma;
                Complex64::new(sym::mu(x, p.sigma_f(), p.ell), 0.0) + shift
            } else {
                -(w.coeffs.get(m - n) / k_sq)
            };
        }
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::L,
        dim,
        basis_modes: modes,
        entries,
        params: *p,
        lambda: None,
    })
}

/// Assemble A = -(d/dz + i gamma) L, row m scaled by -i(m + gamma).
///
/// Built entrywise from the L of the same parameters, so the decomposition
/// A = -K L is exact; the diagonal at a = 0 is i omega(x) with
/// omega(x) = -x^3 + x - sigma ell^2 / x.
pub fn build_a(w: &Wave, p: &BlochParams) -> Result<OperatorMatrix> {
    let l = build_l(w, p)?;
    let mut entries = l.entries;
    for (i, &m) in l.basis_modes.iter().enumerate() {
        let x = m as f64 + p.gamma;
        for j in 0..l.dim {
            let v = entries[[i, j]];
            // -i x (re + i im) = x im - i x re, carried out componentwise.
            entries[[i, j]] = Complex64::new(x * v.im, -(x * v.re));
        }
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::A,
        dim: l.dim,
        basis_modes: l.basis_modes,
        entries,
        params: *p,
        lambda: None,
    })
}

/// Assemble M(lambda) = (d/dz + i gamma)(lambda I - A), row m scaled by
/// i(m + gamma) after subtracting A from lambda on the diagonal.
///
/// lambda lies in the spectrum of A exactly when M(lambda) fails to be
/// invertible.
pub fn build_m(w: &Wave, p: &BlochParams, lambda: Complex64) -> Result<OperatorMatrix> {
    let a = build_a(w, p)?;
    let mut entries = a.entries;
    for (i, &m) in a.basis_modes.iter().enumerate() {
        let k = Complex64::new(0.0, m as f64 + p.gamma);
        for j in 0..a.dim {
            let shifted = if i == j {
                lambda - entries[[i, j]]
            } else {
                -entries[[i, j]]
            };
            entries[[i, j]] = k * shifted;
        }
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::M,
        dim: a.dim,
        basis_modes: a.basis_modes,
        entries,
        params: *p,
        lambda: Some(lambda),
    })
}
