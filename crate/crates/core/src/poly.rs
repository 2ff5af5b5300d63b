//! Quartic Hurwitz test for the reduced boundary system, in the
//! coefficient-positivity-plus-single-minor form, and an independent root
//! oracle through companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scales::DerivedScales;

/// Outcome of the coefficient-form Hurwitz test on the quartic factor of
/// the boundary characteristic polynomial.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuarticHurwitz {
    /// Coefficients `b0..b4`, constant term first.
    pub coeffs: [f64; 5],
    /// The six strict-positivity margins: each coefficient and the single
    /// alternating minor `b1 (b2 b3 - b1 b4) - b3^2 b0`.
    pub margins: [f64; 6],
    /// All margins strictly positive.
    pub pass: bool,
}

/// Quartic coefficients of the reduced boundary polynomial. The remaining
/// factor `lambda^2 + 2 alpha lambda + 1` contributed by the free parameter
/// is Hurwitz for any `alpha > 1`, so stability rests on this quartic.
pub fn hurwitz_coefficients(scales: &DerivedScales) -> [f64; 5] {
    let m = scales.mach();
    let beta_sq = scales.beta_sq();
    let (a1, a2) = (scales.a1, scales.a2);
    let m_star = scales.m_star;
    let b0 = m * (a1 / beta_sq - a2);
    let b1 = 2.0 * (1.0 - m_star * a2);
    let b2 = (2.0 * m / beta_sq) * (2.0 * beta_sq * scales.d0_tilde - a1);
    let b3 = 2.0 * (1.0 + m_star * a2);
    let b4 = m * (a1 / beta_sq + a2);
    [b0, b1, b2, b3, b4]
}

/// Run the quartic Hurwitz test at these scales.
pub fn lienard_chipart(scales: &DerivedScales) -> QuarticHurwitz {
    let coeffs = hurwitz_coefficients(scales);
    let [b0, b1, b2, b3, b4] = coeffs;
    let minor = b1 * (b2 * b3 - b1 * b4) - b3 * b3 * b0;
    let margins = [b0, b1, b2, b3, b4, minor];
    QuarticHurwitz {
        coeffs,
        margins,
        pass: margins.iter().all(|m| *m > 0.0),
    }
}

/// Roots of the quartic, computed independently of the coefficient test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuarticRoots {
    /// All roots (four, or fewer when leading coefficients degenerate).
    pub roots: Vec<Complex64>,
    /// Largest real part among the roots.
    pub max_real_part: f64,
    /// `max_real_part < 0`: every root lies strictly in the open left
    /// half-plane. Callers needing a guard band should inspect
    /// `max_real_part` directly.
    pub all_left_half_plane: bool,
    /// The leading coefficient was negligible and the polynomial was solved
    /// at reduced degree.
    pub degenerate_leading: bool,
}

/// Solve `b4 x^4 + b3 x^3 + b2 x^2 + b1 x + b0 = 0` through the eigenvalues
/// of the companion matrix. A negligible leading coefficient (relative to
/// the largest one) is reported and the polynomial solved as a cubic, and
/// so on down; the zero polynomial is rejected.
pub fn quartic_root_oracle(coeffs: &[f64; 5]) -> Result<QuarticRoots> {
    let scale = coeffs.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::InvalidParameter(
            "polynomial coefficients must be finite and not all zero".into(),
        ));
    }
    let mut degree = 4usize;
    while degree > 0 && coeffs[degree].abs() <= 1e-14 * scale {
        degree -= 1;
    }
    if degree == 0 {
        return Err(Error::Degenerate(
            "polynomial degenerates to a constant; no roots to classify".into(),
        ));
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<f64>::zeros(degree, degree);
    for k in 0..degree {
        companion[(k, degree - 1)] = -coeffs[k] / lead;
        if k > 0 {
            companion[(k, k - 1)] = 1.0;
        }
    }
    let roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    let max_real_part = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(QuarticRoots {
        max_real_part,
        all_left_half_plane: max_real_part < 0.0,
        degenerate_leading: degree < 4,
        roots,
    })
}
