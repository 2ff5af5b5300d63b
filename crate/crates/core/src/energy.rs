//! The energy-method stability criterion: the uniform-stability margin, its
//! closed forms for diagonal and anti-diagonal deformation patterns, the
//! elastic Mach-number sufficient conditions, and the factorized certificate
//! that settles compressive convex-pressure fronts a priori.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::hugoniot::{solve_rankine_hugoniot, RhSolution};
use crate::poly::{lienard_chipart, quartic_root_oracle, QuarticHurwitz};
use crate::scales::{derived_scales, DerivedScales};
use crate::state::{check_lax, LaxReport, SideState};

/// Default half-width of the indeterminate band around a zero margin.
pub const MARGIN_BAND: f64 = 1e-9;

/// Sparsity patterns for which the stability condition collapses to a
/// closed-form inequality in the diagonal (respectively anti-diagonal)
/// entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformationPattern {
    /// Off-diagonal entries vanish (pure stretching).
    Diagonal,
    /// Diagonal entries vanish.
    AntiDiagonal,
}

const PATTERN_TOL: f64 = 1e-12;

/// Detect whether the scaled deformation matches one of the closed-form
/// sparsity patterns.
pub fn detect_pattern(scales: &DerivedScales) -> Option<DeformationPattern> {
    let norm = scales
        .f11()
        .abs()
        .max(scales.f12().abs())
        .max(scales.f21().abs())
        .max(scales.f22().abs())
        .max(1.0);
    let tol = PATTERN_TOL * norm;
    if scales.f12().abs() <= tol && scales.f21().abs() <= tol {
        Some(DeformationPattern::Diagonal)
    } else if scales.f11().abs() <= tol && scales.f22().abs() <= tol {
        Some(DeformationPattern::AntiDiagonal)
    } else {
        None
    }
}

/// The uniform-stability margin in both of its algebraic forms: once in the
/// aggregated scales, once expanded in the deformation entries. They are the
/// same polynomial, so any disagreement beyond rounding is a bookkeeping bug.
pub fn margin_forms(scales: &DerivedScales) -> (f64, f64) {
    let m_sq = scales.m_sq();
    let m_star_sq = scales.m_star_sq();
    let sigma_sq = scales.sigma_sq();
    let beta_sq = scales.beta_sq();
    let ell0 = scales.ell0;
    let r = scales.density_ratio();
    let primary = (m_star_sq + m_sq) * sigma_sq
        - (r * scales.m_tilde_sq() + scales.m2_sq()) * m_star_sq * m_star_sq
        + ell0 * ell0 * (2.0 * beta_sq + m_sq)
        - 2.0 * ell0.abs() * scales.beta * scales.mach() * scales.sigma;

    // Expanded form, straight from the deformation entries.
    let (f11, f12, f21, f22) = (scales.f11(), scales.f12(), scales.f21(), scales.f22());
    let m1s = f11 * f11 + f12 * f12;
    let m2s = f21 * f21 + f22 * f22;
    let frob = m1s + m2s;
    let kap = f11 * f22 - f12 * f21;
    let l0 = f11 * f21 + f12 * f22;
    let star = 1.0 + m1s;
    let expanded = (star + m_sq) * (1.0 + frob + kap * kap)
        - (r * (m_sq - m1s) + m2s) * star * star
        + l0 * l0 * (2.0 * star - m_sq)
        - 2.0 * scales.mach() * l0.abs() * ((star - m_sq) * (1.0 + frob + kap * kap)).sqrt();
    (primary, expanded)
}

/// The uniform-stability margin. Positive means the front satisfies the
/// strengthened energy estimate (uniform stability); the two equivalent
/// algebraic forms are cross-checked against each other at the scale of
/// their constituent terms.
pub fn uniform_stability_margin(scales: &DerivedScales) -> f64 {
    let (primary, expanded) = margin_forms(scales);
    let term_scale = (scales.m_star_sq() + scales.m_sq()) * scales.sigma_sq()
        + (scales.density_ratio() * scales.m_tilde_sq() + scales.m2_sq())
            * scales.m_star_sq()
            * scales.m_star_sq()
        + 1.0;
    debug_assert!(
        (primary - expanded).abs() <= 1e-10 * term_scale,
        "margin forms disagree: {primary} vs {expanded}"
    );
    primary
}

/// Closed-form stability margin for a patterned deformation, normalized so
/// that it equals the uniform-stability margin divided by `M*^2`.
/// `PatternMismatch` if the deformation does not have the requested
/// sparsity.
pub fn stretching_condition(scales: &DerivedScales, pattern: DeformationPattern) -> Result<f64> {
    let detected = detect_pattern(scales);
    if detected != Some(pattern) {
        return Err(Error::PatternMismatch(format!(
            "requested {pattern:?}, deformation is {detected:?}"
        )));
    }
    // For the anti-diagonal pattern the two rows swap roles.
    let (d1, d2) = match pattern {
        DeformationPattern::Diagonal => (scales.f11(), scales.f22()),
        DeformationPattern::AntiDiagonal => (scales.f12(), scales.f21()),
    };
    let m_sq = scales.m_sq();
    let r = scales.density_ratio();
    Ok(1.0 + d1 * d1 + m_sq - r * (1.0 + d1 * d1) * (m_sq - d1 * d1) + d2 * d2 * m_sq)
}

/// Margins of the elastic Mach-number sufficient conditions: the
/// deformation-free bound `M_tilde^2 (R - 1) < 1`, and its sharpened
/// patterned version when the deformation is diagonal or anti-diagonal.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ElasticMachReport {
    /// `1 - M_tilde^2 (R - 1)`; positive suffices for uniform stability in
    /// the deformation-free limit.
    pub gas_margin: f64,
    /// Patterned sharpening of the same bound, when applicable.
    pub pattern_margin: Option<f64>,
}

/// Evaluate the Mach-number sufficient conditions at an explicitly supplied
/// density ratio (callers may probe ratios other than the one embedded in
/// the scales, e.g. the degenerate boundary `r = 1`).
pub fn elastic_mach_check(scales: &DerivedScales, r: f64) -> ElasticMachReport {
    let mt_sq = scales.m_tilde_sq();
    let gas_margin = 1.0 - mt_sq * (r - 1.0);
    let pattern_margin = detect_pattern(scales).map(|pattern| {
        let (d1, d2) = match pattern {
            DeformationPattern::Diagonal => (scales.f11(), scales.f22()),
            DeformationPattern::AntiDiagonal => (scales.f12(), scales.f21()),
        };
        let star = 1.0 + d1 * d1;
        1.0 + (d1 * d1 * (1.0 - mt_sq) + d2 * d2 * (mt_sq + d1 * d1)) / star - mt_sq * (r - 1.0)
    });
    ElasticMachReport {
        gas_margin,
        pattern_margin,
    }
}

/// Factorized certificate behind the equivalent form of the stability
/// condition, together with the two identities that make it checkable.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MarginCertificate {
    /// The discriminant-like product `d = f_minus * f_plus`.
    pub d_value: f64,
    /// Its factors `M sigma - |ell0| beta -/+ M*^2 M_tilde` (minus first).
    pub factors: (f64, f64),
    /// `M*^4 + d - M*^4 M_tilde^2 (R - 1)`; algebraically equal to the
    /// uniform-stability margin.
    pub equivalent_margin: f64,
    /// Relative residual of
    /// `M^2 sigma^2 - ell0^2 beta^2 = M*^2 (M2^2 M_tilde^2 + M^2 + kappa^2)`.
    pub norm_identity_residual: f64,
    /// Value of the nonnegative quadratic in `M_tilde^2` evaluated through
    /// its sum-of-squares expansion.
    pub sos_value: f64,
    /// Relative residual between the literal quadratic and its
    /// sum-of-squares expansion.
    pub sos_residual: f64,
}

/// Build the factorized stability certificate at these scales.
pub fn margin_certificate(scales: &DerivedScales) -> MarginCertificate {
    let m = scales.mach();
    let sigma = scales.sigma;
    let beta = scales.beta;
    let ell0 = scales.ell0.abs();
    let m_star_sq = scales.m_star_sq();
    let m_tilde = scales.m_tilde;
    let f_minus = m * sigma - ell0 * beta - m_star_sq * m_tilde;
    let f_plus = m * sigma - ell0 * beta + m_star_sq * m_tilde;
    let d_value = f_minus * f_plus;
    let r = scales.density_ratio();
    let equivalent_margin =
        m_star_sq * m_star_sq * (1.0 - scales.m_tilde_sq() * (r - 1.0)) + d_value;

    let lhs = m * m * sigma * sigma - ell0 * ell0 * beta * beta;
    let rhs =
        m_star_sq * (scales.m2_sq() * scales.m_tilde_sq() + m * m + scales.kappa * scales.kappa);
    let norm_identity_residual = (lhs - rhs).abs() / rhs.abs().max(1.0);

    // Quadratic in z = M_tilde^2 whose nonnegativity closes the compressive
    // argument, evaluated literally and through its sum-of-squares form.
    let m1s = scales.m1_sq();
    let m2s = scales.m2_sq();
    let kap_sq = scales.kappa * scales.kappa;
    let z = scales.m_tilde_sq();
    let quad = ((m1s + m2s) * (m1s + m2s) - 4.0 * kap_sq) * z * z
        + 2.0 * ((m2s - m1s) * (m1s + kap_sq) + 2.0 * kap_sq - 2.0 * m1s * m2s) * z
        + (m1s + kap_sq) * (m1s + kap_sq);
    let lin = (m1s + m2s) * z - (m1s + kap_sq);
    let sos_value = 4.0 * kap_sq * z * (1.0 - z) + lin * lin + 4.0 * m2s * kap_sq * z;
    let sos_scale = quad.abs().max(sos_value.abs()).max(1.0);
    MarginCertificate {
        d_value,
        factors: (f_minus, f_plus),
        equivalent_margin,
        norm_identity_residual,
        sos_value,
        sos_residual: (quad - sos_value).abs() / sos_scale,
    }
}

/// Combined outcome of the energy-method criteria at one front.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyVerdict {
    /// The uniform-stability margin; positive means uniformly stable.
    pub usc_margin: f64,
    /// Quartic Hurwitz coefficients `b0..b4`.
    pub lc_coeffs: [f64; 5],
    /// Strict positivity of all coefficient margins and the alternating minor.
    pub lc_pass: bool,
    /// Roots of the quartic from the companion-matrix oracle.
    pub quartic_roots: Vec<Complex64>,
    /// Factorized certificate value.
    pub d_value: f64,
    /// `usc_margin > 0`.
    pub stable: bool,
    /// `|usc_margin|` fell inside the indeterminate band.
    pub indeterminate: bool,
}

/// Evaluate every energy-method criterion at these scales, using `band` as
/// the half-width of the indeterminate zone around a vanishing margin.
pub fn energy_verdict(scales: &DerivedScales, band: f64) -> Result<EnergyVerdict> {
    let usc_margin = uniform_stability_margin(scales);
    let lc = lienard_chipart(scales);
    let roots = quartic_root_oracle(&lc.coeffs)?;
    let cert = margin_certificate(scales);
    Ok(EnergyVerdict {
        usc_margin,
        lc_coeffs: lc.coeffs,
        lc_pass: lc.pass,
        quartic_roots: roots.roots,
        d_value: cert.d_value,
        stable: usc_margin > 0.0,
        indeterminate: usc_margin.abs() < band,
    })
}

/// Re-export of the Hurwitz test result for callers that want the margins.
pub fn hurwitz_report(scales: &DerivedScales) -> QuarticHurwitz {
    lienard_chipart(scales)
}

/// A-priori certificate for a compressive front under a convex pressure
/// law: solves the jump relations, verifies admissibility, and certifies
/// uniform stability, returning every supporting margin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompressiveCertificate {
    pub solution: RhSolution,
    pub lax: LaxReport,
    pub energy: EnergyVerdict,
    /// `R * M_tilde^2`, which convexity bounds by 1.
    pub r_mtilde_sq: f64,
    /// The factorized certificate (positive for these fronts).
    pub d_value: f64,
}

/// Certify a compressive front: convex pressure law and `rho_plus >
/// rho_minus` in, uniform stability out. Errors if the hypotheses fail or
/// if — contrary to the supporting theory — one of the certified
/// inequalities comes out non-strict.
pub fn compressive_certificate(
    upstream: &SideState,
    rho_plus: f64,
    eos: &EquationOfState,
    allow_degenerate: bool,
) -> Result<CompressiveCertificate> {
    if !eos.is_convex() {
        return Err(Error::ConvexityRequired(
            "the a-priori certificate needs a convex pressure law".into(),
        ));
    }
    if rho_plus <= upstream.rho {
        return Err(Error::NotCompressive {
            rho_plus,
            rho_minus: upstream.rho,
        });
    }
    let solution = solve_rankine_hugoniot(upstream, rho_plus, eos, allow_degenerate)?;
    let lax = check_lax(&solution.params);
    if !lax.admissible {
        return Err(Error::Numerical(format!(
            "compressive convex front failed the admissibility margins: {lax:?}"
        )));
    }
    let scales = derived_scales(&solution.params)?;
    let energy = energy_verdict(&scales, MARGIN_BAND)?;
    if !energy.stable {
        return Err(Error::Numerical(format!(
            "compressive convex front has non-positive margin {}",
            energy.usc_margin
        )));
    }
    let cert = margin_certificate(&scales);
    let r_mtilde_sq = scales.density_ratio() * scales.m_tilde_sq();
    if r_mtilde_sq > 1.0 + 1e-12 {
        return Err(Error::Numerical(format!(
            "compressive convex front violates R M_tilde^2 <= 1: {r_mtilde_sq}"
        )));
    }
    Ok(CompressiveCertificate {
        solution,
        lax,
        energy,
        r_mtilde_sq,
        d_value: cert.d_value,
    })
}
