//! Dispersion relation of the interior symbol: closed-form factorization
//! into a triple transport factor and two quadratics, selection of the
//! unique spatially decaying root for forward frequencies, and its
//! continuation onto the imaginary axis.

use num_complex::Complex64;

use super::Frequency;
use crate::error::{Error, Result};
use crate::linalg::complex_quadratic_roots;
use crate::scales::DerivedScales;

/// Roots of the slow quadratic factor
/// `Mtilde^2 z^2 + 2 (M^2 s - i omega ell0) z + M^2 s^2 + omega^2 M2^2`.
pub fn q1_roots(scales: &DerivedScales, s: Complex64, omega: f64) -> (Complex64, Complex64) {
    let m_sq = scales.m_sq();
    let a = Complex64::new(scales.m_tilde_sq(), 0.0);
    let b = 2.0 * (m_sq * s - Complex64::new(0.0, omega * scales.ell0));
    let c = m_sq * s * s + Complex64::new(omega * omega * scales.m2_sq(), 0.0);
    complex_quadratic_roots(a, b, c)
}

/// Roots of the fast quadratic factor
/// `-beta^2 z^2 + 2 (M^2 s - i omega ell0) z + M^2 s^2 + omega^2 (1 + M2^2)`.
pub fn q2_roots(scales: &DerivedScales, s: Complex64, omega: f64) -> (Complex64, Complex64) {
    let m_sq = scales.m_sq();
    let a = Complex64::new(-scales.beta_sq(), 0.0);
    let b = 2.0 * (m_sq * s - Complex64::new(0.0, omega * scales.ell0));
    let c = m_sq * s * s + Complex64::new(omega * omega * (1.0 + scales.m2_sq()), 0.0);
    complex_quadratic_roots(a, b, c)
}

/// All seven roots of the interior dispersion polynomial in the normal
/// wavenumber, ordered as the transport triple, the slow pair, then the
/// fast pair.
pub fn dispersion_roots(scales: &DerivedScales, s: Complex64, omega: f64) -> [Complex64; 7] {
    let (q1a, q1b) = q1_roots(scales, s, omega);
    let (q2a, q2b) = q2_roots(scales, s, omega);
    [-s, -s, -s, q1a, q1b, q2a, q2b]
}

fn select_decaying(r1: Complex64, r2: Complex64) -> Result<Complex64> {
    let tol = 1e-14 * (1.0 + r1.norm() + r2.norm());
    match (r1.re > tol, r2.re > tol) {
        (true, false) => Ok(r1),
        (false, true) => Ok(r2),
        (true, true) => Err(Error::Numerical(format!(
            "both fast roots decay ({r1}, {r2}); dispersion selection violated"
        ))),
        (false, false) => Err(Error::SelectionAmbiguous { tol }),
    }
}

/// The unique root of the fast factor with positive real part when the
/// frequency has positive growth rate; for a frequency on the imaginary
/// axis the root is continued from the interior along a geometric schedule
/// and snapped to the exact on-axis root it converges to.
pub fn lambda_plus(scales: &DerivedScales, freq: &Frequency) -> Result<Complex64> {
    freq.validate()?;
    if freq.eta > 0.0 {
        let s = Complex64::new(freq.eta, freq.xi);
        let (r1, r2) = q2_roots(scales, s, freq.omega);
        return select_decaying(r1, r2);
    }

    // Boundary limit: track the decaying root inward along eta = eta0 2^-k
    // and match against the exact on-axis pair at the end.
    let scale = freq.norm().max(1e-3);
    let eta0 = 1e-2 * scale;
    let s0 = Complex64::new(eta0, freq.xi);
    let (r1, r2) = q2_roots(scales, s0, freq.omega);
    let mut tracked = select_decaying(r1, r2)?;
    for k in 1..=20 {
        let eta = eta0 * 0.5_f64.powi(k);
        let s = Complex64::new(eta, freq.xi);
        let (c1, c2) = q2_roots(scales, s, freq.omega);
        tracked = if (c1 - tracked).norm() <= (c2 - tracked).norm() {
            c1
        } else {
            c2
        };
    }
    let s_axis = Complex64::new(0.0, freq.xi);
    let (e1, e2) = q2_roots(scales, s_axis, freq.omega);
    let limit = if (e1 - tracked).norm() <= (e2 - tracked).norm() {
        e1
    } else {
        e2
    };
    Ok(limit)
}
