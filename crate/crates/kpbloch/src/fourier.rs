//! Fourier coefficients of 2 pi periodic functions on the symmetric mode
//! range -N..=N, plus the cosine-series product used by the wave solver.

use num_complex::Complex64;

/// Fourier coefficients c_n of a 2 pi periodic function, stored for the
/// modes -N..=N. Real functions satisfy c_{-n} = conj(c_n); real even
/// functions additionally have every c_n real, which makes them cosine
/// series with amplitude c_0 at mode 0 and 2 c_n at mode n >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    n_trunc: usize,
    c: Vec<Complex64>,
}

impl FourierCoeffs {
    /// All-zero coefficients on the modes -n_trunc..=n_trunc.
    pub fn zeros(n_trunc: usize) -> Self {
        Self {
            n_trunc,
            c: vec![Complex64::ZERO; 2 * n_trunc + 1],
        }
    }

    /// Build from cosine amplitudes: amps[n] multiplies cos(n z).
    ///
    /// Mode 0 keeps its amplitude, every other mode splits it evenly between
    /// +n and -n, so `cosine_amplitude` recovers the inputs exactly.
    pub fn from_cosine(amps: &[f64]) -> Self {
        assert!(!amps.is_empty(), "need at least the mode-0 amplitude");
        let n_trunc = amps.len() - 1;
        let mut out = Self::zeros(n_trunc);
        out.set(0, Complex64::new(amps[0], 0.0));
        for (n, &amp) in amps.iter().enumerate().skip(1) {
            let half = Complex64::new(amp / 2.0, 0.0);
            out.set(n as i64, half);
            out.set(-(n as i64), half);
        }
        out
    }

    /// Truncation order N.
    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    /// Coefficient of mode n; zero outside the stored range.
    pub fn get(&self, mode: i64) -> Complex64 {
        let n = self.n_trunc as i64;
        if mode < -n || mode > n {
            Complex64::ZERO
        } else {
            self.c[(mode + n) as usize]
        }
    }

    /// Overwrite the coefficient of mode n.
    ///
    /// Panics if the mode is outside -n_trunc..=n_trunc.
    pub fn set(&mut self, mode: i64, value: Complex64) {
        let n = self.n_trunc as i64;
        assert!(
            (-n..=n).contains(&mode),
            "mode {mode} outside truncation range"
        );
        self.c[(mode + n) as usize] = value;
    }

    /// Cosine amplitude of cos(n z): c_0 for n = 0, c_n + c_{-n} otherwise.
    pub fn cosine_amplitude(&self, n: usize) -> f64 {
        if n == 0 {
            self.get(0).re
        } else {
            (self.get(n as i64) + self.get(-(n as i64))).re
        }
    }

    /// Evaluate the truncated series at z.
    pub fn eval(&self, z: f64) -> Complex64 {
        let n = self.n_trunc as i64;
        let mut sum = Complex64::ZERO;
        for mode in -n..=n {
            sum += self.get(mode) * Complex64::new(0.0, mode as f64 * z).exp();
        }
        sum
    }

    /// Coefficients of the z-derivative: mode n picks up a factor i n.
    pub fn derivative(&self) -> Self {
        let n = self.n_trunc as i64;
        let mut out = Self::zeros(self.n_trunc);
        for mode in -n..=n {
            out.set(mode, Complex64::new(0.0, mode as f64) * self.get(mode));
        }
        out
    }

    /// Largest deviation from the real-function condition c_{-n} = conj(c_n).
    pub fn realness_defect(&self) -> f64 {
        let n = self.n_trunc as i64;
        (0..=n)
            .map(|mode| (self.get(-mode) - self.get(mode).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part over all coefficients. Zero together with the
    /// realness defect means the function is real and even, a cosine series.
    pub fn evenness_defect(&self) -> f64 {
        self.c.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// l2 norm of the coefficient vector.
    pub fn l2_norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Product of two cosine series in amplitude form.
///
/// With p = sum p_j cos(j z) and q = sum q_k cos(k z), the identity
/// cos(j z) cos(k z) = (cos((j+k) z) + cos(|j-k| z)) / 2 spreads each pair
/// of terms over two output modes. The result has p.len() + q.len() - 1
/// amplitudes and is exact up to rounding; nothing is truncated.
pub fn cosine_product(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (j, &pj) in p.iter().enumerate() {
        if pj == 0.0 {
            continue;
        }
        for (k, &qk) in q.iter().enumerate() {
            let term = 0.5 * pj * qk;
            out[j + k] += term;
            out[j.abs_diff(k)] += term;
        }
    }
    out
}
