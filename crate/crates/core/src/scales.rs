//! Derived dimensionless quantities of an extreme planar front.
//!
//! Everything downstream of the jump relations — the energy criterion, the
//! boundary-system symmetrizer, and the normal-mode analysis — is a function
//! of the scales collected here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::ShockParameters;

/// Scalar combinations of `(M, R, F)` used throughout the stability
/// analysis. Constructed by [`derived_scales`]; fields are read-only by
/// convention once built.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DerivedScales {
    /// Originating dimensionless front parameters.
    pub params: ShockParameters,
    /// Shear Mach number from the first deformation row: `M1^2 = F11^2 + F12^2`.
    pub m1: f64,
    /// Shear Mach number from the second deformation row: `M2^2 = F21^2 + F22^2`.
    pub m2: f64,
    /// Fast-speed threshold: `M*^2 = 1 + M1^2`.
    pub m_star: f64,
    /// Subsonic gap: `beta^2 = M*^2 - M^2 > 0`.
    pub beta: f64,
    /// Mixed norm: `sigma^2 = M*^2 (1 + M2^2) - ell0^2`.
    pub sigma: f64,
    /// Row correlation: `ell0 = F11 F21 + F12 F22`.
    pub ell0: f64,
    /// Determinant of the scaled deformation gradient.
    pub kappa: f64,
    /// Supersonic-relative-to-shear gap: `M_tilde^2 = M^2 - M1^2 > 0`.
    pub m_tilde: f64,
    /// Pressure coupling in the front boundary condition:
    /// `d0 = (M*^2 + M^2) / (2 M^2)`.
    pub d0: f64,
    /// Tangential-derivative coupling: `a0 = -beta^2 R / (2 M^2)`.
    pub a0: f64,
    /// `d0_tilde = d0 / M*`.
    pub d0_tilde: f64,
    /// Leading coefficient of the reduced second-order energy balance.
    pub a1: f64,
    /// Skew coefficient of the reduced balance: `a2 = ell0 beta / (M* M sigma)`.
    pub a2: f64,
    /// Diagonal-pattern classifier combination: `K = R (M^2 - F11^2) + F22^2`.
    pub k: f64,
    /// `K1 = M^2 K2 / M*^2`.
    pub k1: f64,
    /// `K2 = 1 + F22^2`.
    pub k2: f64,
}

impl DerivedScales {
    pub fn mach(&self) -> f64 {
        self.params.mach
    }
    pub fn density_ratio(&self) -> f64 {
        self.params.density_ratio
    }
    pub fn f11(&self) -> f64 {
        self.params.f11()
    }
    pub fn f12(&self) -> f64 {
        self.params.f12()
    }
    pub fn f21(&self) -> f64 {
        self.params.f21()
    }
    pub fn f22(&self) -> f64 {
        self.params.f22()
    }
    pub fn m_sq(&self) -> f64 {
        self.params.mach * self.params.mach
    }
    pub fn m1_sq(&self) -> f64 {
        self.m1 * self.m1
    }
    pub fn m2_sq(&self) -> f64 {
        self.m2 * self.m2
    }
    pub fn m_star_sq(&self) -> f64 {
        self.m_star * self.m_star
    }
    pub fn beta_sq(&self) -> f64 {
        self.beta * self.beta
    }
    pub fn sigma_sq(&self) -> f64 {
        self.sigma * self.sigma
    }
    pub fn m_tilde_sq(&self) -> f64 {
        self.m_tilde * self.m_tilde
    }
}

/// Build the derived scales, enforcing the two strict inequalities that make
/// the front an extreme shock (`M1 < M < M*`). Fails with `LaxViolated`
/// otherwise, since every later formula divides by `beta` or `M_tilde`.
pub fn derived_scales(params: &ShockParameters) -> Result<DerivedScales> {
    let m = params.mach;
    let m_sq = m * m;
    let (f11, f12, f21, f22) = (params.f11(), params.f12(), params.f21(), params.f22());
    let m1_sq = f11 * f11 + f12 * f12;
    let m2_sq = f21 * f21 + f22 * f22;
    let m_star_sq = 1.0 + m1_sq;
    let beta_sq = m_star_sq - m_sq;
    let m_tilde_sq = m_sq - m1_sq;
    if m_tilde_sq <= 0.0 {
        return Err(Error::LaxViolated(format!(
            "M = {m} does not exceed the shear threshold M1 = {}",
            m1_sq.sqrt()
        )));
    }
    if beta_sq <= 0.0 {
        return Err(Error::LaxViolated(format!(
            "M = {m} is not below the fast threshold M* = {}",
            m_star_sq.sqrt()
        )));
    }
    let ell0 = f11 * f21 + f12 * f22;
    let kappa = params.det_deformation();
    let sigma_sq = m_star_sq * (1.0 + m2_sq) - ell0 * ell0;
    // Same quantity through the determinant identity
    // ell0^2 = M1^2 M2^2 - kappa^2; disagreement would mean a bookkeeping bug.
    let sigma_sq_alt = m_star_sq + m2_sq + kappa * kappa;
    debug_assert!(
        (sigma_sq - sigma_sq_alt).abs() <= 1e-12 * sigma_sq.abs().max(1.0),
        "sigma^2 forms disagree: {sigma_sq} vs {sigma_sq_alt}"
    );
    let m_star = m_star_sq.sqrt();
    let beta = beta_sq.sqrt();
    let sigma = sigma_sq.sqrt();
    let r = params.density_ratio;
    let d0 = (m_star_sq + m_sq) / (2.0 * m_sq);
    let a0 = -beta_sq * r / (2.0 * m_sq);
    let d0_tilde = d0 / m_star;
    let a2 = ell0 * beta / (m_star * m * sigma);
    let a1 = beta_sq * d0_tilde
        + a0 * (m_tilde_sq + m2_sq / r) * m_star_sq * m_star / sigma_sq
        + a2 * a2 * m_star * (beta_sq + 0.5 * m_sq);
    let k2 = 1.0 + f22 * f22;
    let k1 = m_sq * k2 / m_star_sq;
    let k = r * (m_sq - f11 * f11) + f22 * f22;
    Ok(DerivedScales {
        params: *params,
        m1: m1_sq.sqrt(),
        m2: m2_sq.sqrt(),
        m_star,
        beta,
        sigma,
        ell0,
        kappa,
        m_tilde: m_tilde_sq.sqrt(),
        d0,
        a0,
        d0_tilde,
        a1,
        a2,
        k,
        k1,
        k2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_params() -> ShockParameters {
        ShockParameters::new(0.9, 2.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap()
    }

    #[test]
    fn reference_point_scales() {
        // Frozen against an independent high-precision evaluation of the
        // defining formulas at M = 0.9, R = 2, F = diag(0.5, 0.8).
        let s = derived_scales(&reference_params()).unwrap();
        assert!((s.m1 - 0.5).abs() < 1e-15);
        assert!((s.m2 - 0.8).abs() < 1e-15);
        assert!((s.m_star - 1.118033988749895).abs() < 1e-12);
        assert!((s.beta - 0.6633249580710799).abs() < 1e-12);
        assert!((s.sigma - 1.4317821063276353).abs() < 1e-12);
        assert!((s.m_tilde - 0.7483314773547882).abs() < 1e-12);
        assert!((s.d0 - 1.2716049382716048).abs() < 1e-12);
        assert!((s.a0 + 0.5432098765432098).abs() < 1e-12);
        assert!((s.kappa - 0.4).abs() < 1e-15);
        assert_eq!(s.ell0, 0.0);
        assert_eq!(s.a2, 0.0);
        assert!((s.k - 1.76).abs() < 1e-12);
        assert!((s.k2 - 1.64).abs() < 1e-12);
        assert!((s.k1 - 1.06272).abs() < 1e-12);
    }

    #[test]
    fn shear_threshold_is_enforced() {
        let params = ShockParameters::new(0.45, 2.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap();
        assert!(matches!(
            derived_scales(&params),
            Err(Error::LaxViolated(_))
        ));
    }

    #[test]
    fn fast_threshold_is_enforced() {
        let params = ShockParameters::new(1.2, 2.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap();
        assert!(matches!(
            derived_scales(&params),
            Err(Error::LaxViolated(_))
        ));
    }

    #[test]
    fn gas_limit_scales_collapse() {
        let params =
            ShockParameters::new_allow_degenerate(0.7, 3.0, [[0.0, 0.0], [0.0, 0.0]], None)
                .unwrap();
        let s = derived_scales(&params).unwrap();
        assert_eq!(s.m1, 0.0);
        assert_eq!(s.m2, 0.0);
        assert_eq!(s.m_star, 1.0);
        assert_eq!(s.sigma, 1.0);
        assert!((s.m_tilde - 0.7).abs() < 1e-15);
    }
}
