//! Physical side states, dimensionless front parameters, Lax admissibility,
//! and the hyperbolic characteristic speeds.

use serde::{Deserialize, Serialize};

use crate::eos::EquationOfState;
use crate::error::{Error, Result};

/// Fluid/elastic state on one side of the front: density, velocity, and the
/// deformation gradient stored row-major (`f[0] = (F11, F12)`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SideState {
    pub rho: f64,
    pub v: [f64; 2],
    #[serde(rename = "F")]
    pub f: [[f64; 2]; 2],
}

impl SideState {
    pub fn det_f(&self) -> f64 {
        self.f[0][0] * self.f[1][1] - self.f[0][1] * self.f[1][0]
    }

    /// Check positivity/finiteness; `allow_degenerate` admits `det F = 0`
    /// (the gas-dynamics limit).
    pub fn validate(&self, allow_degenerate: bool) -> Result<()> {
        let fields = [
            self.rho,
            self.v[0],
            self.v[1],
            self.f[0][0],
            self.f[0][1],
            self.f[1][0],
            self.f[1][1],
        ];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "state fields must be finite".into(),
            ));
        }
        if self.rho <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "density must be positive, got {}",
                self.rho
            )));
        }
        if !allow_degenerate && self.det_f() == 0.0 {
            return Err(Error::DegenerateDeformation { det: 0.0 });
        }
        Ok(())
    }
}

/// Dimensionless description of a planar front: downstream Mach number `M`,
/// density ratio `R` across the jump, the scaled downstream deformation
/// gradient, and optionally the upstream Mach number.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ShockParameters {
    /// Downstream normal Mach number (`M > 0`).
    pub mach: f64,
    /// Density ratio across the front, `R = rho_downstream / rho_upstream`;
    /// `R > 1` is compressive.
    pub density_ratio: f64,
    /// Scaled deformation gradient, row-major.
    pub deformation: [[f64; 2]; 2],
    /// Upstream normal Mach number, when known.
    pub upstream_mach: Option<f64>,
}

impl ShockParameters {
    /// Validated constructor; `det(deformation) = 0` requires the degenerate
    /// flag (see [`ShockParameters::new_allow_degenerate`]).
    pub fn new(
        mach: f64,
        density_ratio: f64,
        deformation: [[f64; 2]; 2],
        upstream_mach: Option<f64>,
    ) -> Result<Self> {
        Self::build(mach, density_ratio, deformation, upstream_mach, false)
    }

    /// As [`ShockParameters::new`], but admits a singular scaled deformation
    /// (gas-dynamics limit).
    pub fn new_allow_degenerate(
        mach: f64,
        density_ratio: f64,
        deformation: [[f64; 2]; 2],
        upstream_mach: Option<f64>,
    ) -> Result<Self> {
        Self::build(mach, density_ratio, deformation, upstream_mach, true)
    }

    fn build(
        mach: f64,
        density_ratio: f64,
        deformation: [[f64; 2]; 2],
        upstream_mach: Option<f64>,
        allow_degenerate: bool,
    ) -> Result<Self> {
        let mut fields = vec![mach, density_ratio];
        fields.extend(deformation.iter().flatten());
        if let Some(mm) = upstream_mach {
            fields.push(mm);
        }
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "front parameters must be finite".into(),
            ));
        }
        if mach <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Mach number must be positive, got {mach}"
            )));
        }
        if density_ratio <= 0.0 || density_ratio == 1.0 {
            return Err(Error::InvalidParameter(format!(
                "density ratio must be positive and differ from 1, got {density_ratio}"
            )));
        }
        let det = deformation[0][0] * deformation[1][1] - deformation[0][1] * deformation[1][0];
        if !allow_degenerate && det == 0.0 {
            return Err(Error::DegenerateDeformation { det });
        }
        Ok(ShockParameters {
            mach,
            density_ratio,
            deformation,
            upstream_mach,
        })
    }

    pub fn f11(&self) -> f64 {
        self.deformation[0][0]
    }
    pub fn f12(&self) -> f64 {
        self.deformation[0][1]
    }
    pub fn f21(&self) -> f64 {
        self.deformation[1][0]
    }
    pub fn f22(&self) -> f64 {
        self.deformation[1][1]
    }

    pub fn det_deformation(&self) -> f64 {
        self.f11() * self.f22() - self.f12() * self.f21()
    }
}

/// Extreme-shock admissibility margins. The front is a Lax shock when the
/// downstream Mach number sits between the shear and fast thresholds and, if
/// the upstream Mach number is supplied, the incoming flow is supersonic
/// relative to the fast characteristic there.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LaxReport {
    /// `M - M1`: downstream flow faster than the shear speed.
    pub shear_margin: f64,
    /// `M* - M`: downstream flow slower than the fast speed.
    pub fast_margin: f64,
    /// `M_minus - M / sqrt(M^2 - M1^2)`, when the upstream Mach is known and
    /// the denominator is real.
    pub upstream_margin: Option<f64>,
    pub admissible: bool,
}

/// Evaluate the extreme-shock inequalities; always reports margins, even
/// when violated.
pub fn check_lax(params: &ShockParameters) -> LaxReport {
    let m = params.mach;
    let m1 = (params.f11() * params.f11() + params.f12() * params.f12()).sqrt();
    let m_star = (1.0 + m1 * m1).sqrt();
    let shear_margin = m - m1;
    let fast_margin = m_star - m;
    let upstream_margin = params.upstream_mach.and_then(|mm| {
        let mt_sq = m * m - m1 * m1;
        (mt_sq > 0.0).then(|| mm - m / mt_sq.sqrt())
    });
    let mut admissible = shear_margin > 0.0 && fast_margin > 0.0;
    if params.upstream_mach.is_some() {
        admissible &= upstream_margin.map_or(false, |u| u > 0.0);
    }
    LaxReport {
        shear_margin,
        fast_margin,
        upstream_margin,
        admissible,
    }
}

/// The seven characteristic speeds of the first-order system in the
/// direction with normal velocity `v_n`, normal deformation column entries
/// `(f1n, f2n)`, and sound speed `c`. Returned weakly sorted; the middle
/// speed has multiplicity three.
pub fn characteristic_speeds(rho: f64, v_n: f64, f1n: f64, f2n: f64, c: f64) -> Result<[f64; 7]> {
    if !(rho.is_finite() && v_n.is_finite() && f1n.is_finite() && f2n.is_finite() && c.is_finite())
    {
        return Err(Error::InvalidParameter(
            "characteristic inputs must be finite".into(),
        ));
    }
    if rho <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "density must be positive, got {rho}"
        )));
    }
    if c <= 0.0 {
        return Err(Error::NonHyperbolic {
            rho,
            dpdrho: c * c * c.signum(),
        });
    }
    let shear_sq = f1n * f1n + f2n * f2n;
    let fast = (c * c + shear_sq).sqrt();
    let shear = shear_sq.sqrt();
    Ok([
        v_n - fast,
        v_n - shear,
        v_n,
        v_n,
        v_n,
        v_n + shear,
        v_n + fast,
    ])
}

/// Reduce a physical pair of states to the dimensionless front parameters:
/// velocities are scaled by the downstream sound speed and the common
/// tangential velocity is removed by a Galilean shift.
pub fn nondimensionalize(
    upstream: &SideState,
    downstream: &SideState,
    eos: &EquationOfState,
    allow_degenerate: bool,
) -> Result<ShockParameters> {
    upstream.validate(allow_degenerate)?;
    downstream.validate(allow_degenerate)?;
    let tangential_jump = (upstream.v[1] - downstream.v[1]).abs();
    let scale = upstream.v[1].abs().max(downstream.v[1].abs()).max(1.0);
    if tangential_jump > 1e-10 * scale {
        return Err(Error::FrameError {
            jump: tangential_jump,
        });
    }
    if upstream.rho == downstream.rho {
        return Err(Error::Degenerate("density jump vanishes".into()));
    }
    let plus = eos.eval(downstream.rho)?;
    let minus = eos.eval(upstream.rho)?;
    let c_plus = plus.c_squared.sqrt();
    let c_minus = minus.c_squared.sqrt();
    if downstream.v[0] <= 0.0 || upstream.v[0] <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "normal velocities must be positive in the front-adapted frame, got {} and {}",
            upstream.v[0], downstream.v[0]
        )));
    }
    let mach = downstream.v[0] / c_plus;
    let density_ratio = downstream.rho / upstream.rho;
    let mut deformation = downstream.f;
    for row in deformation.iter_mut() {
        for entry in row.iter_mut() {
            *entry /= c_plus;
        }
    }
    let upstream_mach = Some(upstream.v[0] / c_minus);
    ShockParameters::build(
        mach,
        density_ratio,
        deformation,
        upstream_mach,
        allow_degenerate,
    )
}
