//! Scalar Fourier symbols of the constant-coefficient part of the problem.
//!
//! Both the dense operator assembly and the closed-form predictors go through
//! these two functions, so the two code paths agree to the last bit wherever
//! they are meant to coincide.

/// Symbol of the Hessian at the zero wave: mu(x) = x^2 - 1 + sigma ell^2 / x^2.
#[inline]
pub(crate) fn mu(x: f64, sigma: f64, ell: f64) -> f64 {
    let x2 = x * x;
    x2 - 1.0 + sigma * (ell * ell) / x2
}

/// Linear dispersion relation omega(x) = -x^3 + x - sigma ell^2 / x, evaluated
/// as -x * mu(x) so that i omega(x) matches the assembled diagonal exactly.
#[inline]
pub(crate) fn omega(x: f64, sigma: f64, ell: f64) -> f64 {
    -(x * mu(x, sigma, ell))
}
