//! Transverse spectral stability of small periodic waves of the
//! Kadomtsev-Petviashvili equation.
//!
//! The crate computes the family of small even 2 pi periodic traveling
//! waves of (u_t - u_xxx - u u_x)_x + sigma u_yy = 0 (sigma = +1 KP-I,
//! sigma = -1 KP-II), assembles the Floquet-Bloch linearization about a
//! wave for transverse perturbations with wavenumber ell and Floquet
//! exponent gamma, computes dense spectra, and compares the measured
//! stability boundaries against the closed-form small-amplitude predictors:
//! the long-wavelength threshold ell^2 = a^2/12, the bubble of transverse
//! instability around the mode collision at ell_c(gamma) = sqrt(3)
//! gamma(1-gamma), and the KP-II collision loci ell_mp.
//!
//! ```
//! use kpbloch::waves::solve_wave;
//! use kpbloch::scanner::record_at;
//!
//! let w = solve_wave(0.1, 32, 1e-12).unwrap();
//! assert!((w.k_sq - (1.0 - 5.0 * 0.01 / 24.0)).abs() < 1e-4);
//!
//! // Inside the long-wavelength band the wave is transversely unstable.
//! let (rec, _) = record_at(&w, 1, 0.0, 0.02, 32, 1e-8).unwrap();
//! assert_eq!(rec.unstable_count, 1);
//! ```

pub mod asymptotics;
pub mod error;
pub mod fourier;
pub mod operators;
pub mod scanner;
pub mod spectra;
mod sym;
pub mod verify;
pub mod waves;

pub use error::{Error, Result};
