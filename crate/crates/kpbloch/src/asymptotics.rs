//! Closed-form small-amplitude predictors.
//!
//! Everything here is a leading-order formula: the unperturbed eigenvalue
//! symbols mu_n and i omega_n, the long-wavelength threshold ell_a^2 =
//! a^2/12, the collision locus ell_c(gamma) and its bubble half-width
//! eps_a(gamma), the sign-change loci of mu_0 and mu_{-1}, the KP-II
//! collision wavenumbers ell_mp, and the reduced 2x2 matrices whose
//! eigenvalues govern the onset of instability. Remainder terms of order
//! a^4 and a^2 (ell^2 + a^2) are dropped; the comparison tolerances used by
//! the scanner absorb them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::BlochParams;
use crate::sym;

fn require_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 0.5 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            requirement: "within (0, 1/2]",
        })
    }
}

/// mu_n = (n+gamma)^2 - 1 + sigma ell^2 / (n+gamma)^2, the n-th eigenvalue
/// of the unperturbed L block.
pub fn mu_n(n: i64, p: &BlochParams) -> Result<f64> {
    let x = n as f64 + p.gamma;
    if x == 0.0 {
        return Err(Error::SingularSymbol {
            mode: n,
            gamma: p.gamma,
        });
    }
    Ok(sym::mu(x, p.sigma_f(), p.ell))
}

/// omega_n = -(n+gamma)^3 + (n+gamma) - sigma ell^2 / (n+gamma); the
/// unperturbed A block has eigenvalues i omega_n.
pub fn omega_n(n: i64, p: &BlochParams) -> Result<f64> {
    let x = n as f64 + p.gamma;
    if x == 0.0 {
        return Err(Error::SingularSymbol {
            mode: n,
            gamma: p.gamma,
        });
    }
    Ok(sym::omega(x, p.sigma_f(), p.ell))
}

/// Long-wavelength KP-I threshold ell_a^2 = a^2 / 12: the band of unstable
/// squared wavenumbers at gamma = 0 is (0, ell_a^2) to leading order.
pub fn ell_a_sq(a: f64) -> f64 {
    a * a / 12.0
}

/// Collision wavenumber ell_c(gamma) = sqrt(3) gamma (1 - gamma), where the
/// modes 0 and -1 of the unperturbed Bloch operator collide.
pub fn ell_c(gamma: f64) -> Result<f64> {
    require_gamma(gamma)?;
    Ok(3.0f64.sqrt() * gamma * (1.0 - gamma))
}

/// Predicted half-width eps_a(gamma) = (gamma (1-gamma))^{3/2} |a| of the
/// instability bubble in ell^2 around ell_c^2.
pub fn eps_a(gamma: f64, a: f64) -> Result<f64> {
    require_gamma(gamma)?;
    Ok((gamma * (1.0 - gamma)).powf(1.5) * a.abs())
}

/// Sign-change locus of mu_0: ell_0^2 = gamma^2 (1 - gamma^2).
pub fn ell_0_sq(gamma: f64) -> Result<f64> {
    require_gamma(gamma)?;
    Ok(gamma * gamma * (1.0 - gamma * gamma))
}

/// Sign-change locus of mu_{-1}: ell_-^2 = gamma (1-gamma)^2 (2-gamma).
/// Together with ell_0_sq it brackets ell_c^2 strictly for gamma < 1/2;
/// the three coincide at gamma = 1/2.
pub fn ell_minus_sq(gamma: f64) -> Result<f64> {
    require_gamma(gamma)?;
    Ok(gamma * (1.0 - gamma) * (1.0 - gamma) * (2.0 - gamma))
}

/// KP-II collision locus ell_mp^2 = m p (m^2 - m p + p^2 - 1), where the
/// dispersion curves of modes m and -p cross.
pub fn ell_mp_sq(m: u32, p: u32) -> f64 {
    let (m, p) = (m as f64, p as f64);
    m * p * (m * m - m * p + p * p - 1.0)
}

/// Leading-order squared growth rate of the periodic (gamma = 0) problem:
/// lambda^2 = -ell^2 (ell^2 - sigma a^2 / 12). Positive values mean a real
/// unstable pair (KP-I below threshold); KP-II (sigma = -1) never admits
/// one.
pub fn reduced_lambda_sq_periodic(a: f64, ell: f64, sigma: i32) -> f64 {
    let ell_sq = ell * ell;
    -ell_sq * (ell_sq - sigma as f64 * ell_a_sq(a))
}

/// Which reduction a 2x2 matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// gamma = 0, long-wavelength reduction on the generalized kernel.
    Periodic,
    /// gamma != 0, reduction on the colliding modes 0 and -1.
    Bloch,
}

/// Leading-order 2x2 reduction of the linearized operator.
#[derive(Debug, Clone)]
pub struct ReducedMatrix2 {
    pub entries: [[Complex64; 2]; 2],
    pub regime: Regime,
    pub a: f64,
    pub ell: f64,
    pub gamma: f64,
}

impl ReducedMatrix2 {
    /// Eigenvalues of the 2x2, by the quadratic formula (complex sqrt).
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        let [[a11, a12], [a21, a22]] = self.entries;
        let half_tr = (a11 + a22) / 2.0;
        let det = a11 * a22 - a12 * a21;
        let disc = (half_tr * half_tr - det).sqrt();
        (half_tr + disc, half_tr - disc)
    }
}

/// Periodic-regime reduction [[0, ell^2 - a^2/12], [-ell^2, 0]]; its
/// eigenvalues square to `reduced_lambda_sq_periodic` at sigma = +1.
pub fn reduced_matrix_periodic(a: f64, ell: f64) -> ReducedMatrix2 {
    let ell_sq = ell * ell;
    let z = Complex64::ZERO;
    ReducedMatrix2 {
        entries: [
            [z, Complex64::new(ell_sq - ell_a_sq(a), 0.0)],
            [Complex64::new(-ell_sq, 0.0), z],
        ],
        regime: Regime::Periodic,
        a,
        ell,
        gamma: 0.0,
    }
}

/// Bloch-regime reduction near the mode collision, with its characteristic
/// data.
#[derive(Debug, Clone)]
pub struct BlochReduction {
    pub matrix: ReducedMatrix2,
    /// Detuning from the collision: epsilon = ell^2 - ell_c^2(gamma).
    pub epsilon: f64,
    /// Roots of the shifted characteristic polynomial P(X).
    pub p_roots: (Complex64, Complex64),
    /// Eigenvalues i(c + X) with c the collision frequency.
    pub eigenvalues: (Complex64, Complex64),
    /// Discriminant of P: epsilon^2 / (gamma^2 (1-gamma)^2) - gamma (1-gamma) a^2.
    pub discriminant: f64,
    /// Instability is predicted exactly when the discriminant is negative.
    pub unstable: bool,
}

/// Reduction of the KP-I Bloch operator onto the colliding modes 0 and -1.
///
/// The diagonal keeps the exact dispersion values i omega_0(ell, gamma) and
/// i omega_{-1}(ell, gamma), written as the collision value minus
/// i eps/gamma and i eps/(gamma-1); off-diagonal coupling is (i/2) gamma a
/// and (i/2)(gamma-1) a. Eigenvalues are reported both ways: from the 2x2
/// directly and through the roots of the shifted polynomial
/// P(X) = X^2 + X (eps/gamma - eps/(1-gamma)) + gamma(1-gamma) a^2/4
///        - eps^2/(gamma(1-gamma)),
/// whose discriminant collapses to the printed closed form.
pub fn reduced_matrix_bloch(a: f64, ell: f64, gamma: f64) -> Result<BlochReduction> {
    require_gamma(gamma)?;
    let lc = ell_c(gamma)?;
    let epsilon = ell * ell - lc * lc;
    let om0 = sym::omega(gamma, 1.0, lc);
    let om1 = sym::omega(gamma - 1.0, 1.0, lc);
    let matrix = ReducedMatrix2 {
        entries: [
            [
                Complex64::new(0.0, om0 - epsilon / gamma),
                Complex64::new(0.0, 0.5 * gamma * a),
            ],
            [
                Complex64::new(0.0, 0.5 * (gamma - 1.0) * a),
                Complex64::new(0.0, om1 - epsilon / (gamma - 1.0)),
            ],
        ],
        regime: Regime::Bloch,
        a,
        ell,
        gamma,
    };
    let gg = gamma * (1.0 - gamma);
    let b = epsilon / gamma - epsilon / (1.0 - gamma);
    let c = gg * a * a / 4.0 - epsilon * epsilon / gg;
    let discriminant = epsilon * epsilon / (gg * gg) - gg * a * a;
    let sqrt_disc = Complex64::new(discriminant, 0.0).sqrt();
    let x_plus = (-Complex64::new(b, 0.0) + sqrt_disc) / 2.0;
    let x_minus = (-Complex64::new(b, 0.0) - sqrt_disc) / 2.0;
    debug_assert!(
        ((x_plus * x_minus) - Complex64::new(c, 0.0)).norm() <= 1e-12 * (1.0 + c.abs()),
        "root product must reproduce the constant coefficient"
    );
    let collision = Complex64::new(0.0, -2.0 * gg * (1.0 - 2.0 * gamma));
    let i = Complex64::new(0.0, 1.0);
    Ok(BlochReduction {
        matrix,
        epsilon,
        p_roots: (x_plus, x_minus),
        eigenvalues: (collision + i * x_plus, collision + i * x_minus),
        discriminant,
        unstable: discriminant < 0.0,
    })
}

/// Predicted location and extent of an instability band in ell^2.
#[derive(Debug, Clone, Copy)]
pub struct BubblePrediction {
    pub center_ell_sq: f64,
    pub half_width_ell_sq: f64,
    pub regime: Regime,
}

impl BubblePrediction {
    /// The gamma = 0 long-wavelength band (0, a^2/12), seen as a bubble
    /// centered at a^2/24.
    pub fn periodic(a: f64) -> Self {
        let half = ell_a_sq(a) / 2.0;
        Self {
            center_ell_sq: half,
            half_width_ell_sq: half,
            regime: Regime::Periodic,
        }
    }

    /// The Bloch bubble |ell^2 - ell_c^2| < eps_a(gamma).
    pub fn bloch(gamma: f64, a: f64) -> Result<Self> {
        let lc = ell_c(gamma)?;
        Ok(Self {
            center_ell_sq: lc * lc,
            half_width_ell_sq: eps_a(gamma, a)?,
            regime: Regime::Bloch,
        })
    }
}
