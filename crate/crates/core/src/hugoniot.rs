//! Jump relations for a planar front: given the upstream state and the
//! downstream density, complete both sides and reduce them to dimensionless
//! front parameters.

use serde::{Deserialize, Serialize};

use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::state::{nondimensionalize, ShockParameters, SideState};

/// A completed planar-front solution of the jump relations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RhSolution {
    /// Upstream state with its normal velocity filled in.
    pub upstream: SideState,
    /// Downstream state determined by the jump relations.
    pub downstream: SideState,
    /// Dimensionless reduction of the pair.
    pub params: ShockParameters,
    /// True when the density rises across the front; rarefaction-side data
    /// (`rho_plus < rho_minus`) is solved but tagged, not rejected.
    pub compressive: bool,
}

/// Solve the jump relations in the frame where the front is at rest and the
/// flow crosses it in the positive normal direction.
///
/// The upstream *normal* velocity is an output, not an input: prescribing
/// `(rho_minus, F_minus)` together with `rho_plus` already determines both
/// normal velocities, so `upstream.v[0]` is ignored and recomputed. The
/// tangential velocity is carried through unchanged (it is continuous across
/// the front) and the deformation rows transform as `F1+ = F1- / R`,
/// `F2+ = F2-`.
pub fn solve_rankine_hugoniot(
    upstream: &SideState,
    rho_plus: f64,
    eos: &EquationOfState,
    allow_degenerate: bool,
) -> Result<RhSolution> {
    let finite = upstream.rho.is_finite()
        && upstream.v[1].is_finite()
        && upstream.f.iter().flatten().all(|x| x.is_finite())
        && rho_plus.is_finite();
    if !finite {
        return Err(Error::InvalidParameter(
            "jump-relation inputs must be finite".into(),
        ));
    }
    if upstream.rho <= 0.0 || rho_plus <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "densities must be positive, got {} and {}",
            upstream.rho, rho_plus
        )));
    }
    if !allow_degenerate && upstream.det_f() == 0.0 {
        return Err(Error::DegenerateDeformation { det: 0.0 });
    }
    let drho = rho_plus - upstream.rho;
    if drho == 0.0 {
        return Err(Error::Degenerate("density jump vanishes".into()));
    }
    let ratio = rho_plus / upstream.rho;
    let minus = eos.eval(upstream.rho)?;
    let plus = eos.eval(rho_plus)?;
    let dp = plus.p - minus.p;

    let f_plus = [
        [upstream.f[0][0] / ratio, upstream.f[0][1] / ratio],
        [upstream.f[1][0], upstream.f[1][1]],
    ];
    let shear_sq = f_plus[0][0] * f_plus[0][0] + f_plus[0][1] * f_plus[0][1];
    let v1_plus_sq = shear_sq + dp / (ratio * drho);
    if v1_plus_sq <= 0.0 {
        return Err(Error::NoRealRoot { v1_sq: v1_plus_sq });
    }
    let v1_plus = v1_plus_sq.sqrt();
    let v1_minus = ratio * v1_plus;
    let v2 = upstream.v[1];

    let upstream_full = SideState {
        rho: upstream.rho,
        v: [v1_minus, v2],
        f: upstream.f,
    };
    let downstream = SideState {
        rho: rho_plus,
        v: [v1_plus, v2],
        f: f_plus,
    };
    let params = nondimensionalize(&upstream_full, &downstream, eos, allow_degenerate)?;
    Ok(RhSolution {
        upstream: upstream_full,
        downstream,
        params,
        compressive: rho_plus > upstream.rho,
    })
}

/// Relative residuals of the six jump relations for a state pair: mass flux,
/// normal momentum, continuity of the second deformation row, and continuity
/// of the mass-weighted first deformation row. All should vanish for a valid
/// solution; they serve as the independent check on the solver.
pub fn rh_residuals(
    upstream: &SideState,
    downstream: &SideState,
    eos: &EquationOfState,
) -> Result<[f64; 6]> {
    let minus = eos.eval(upstream.rho)?;
    let plus = eos.eval(downstream.rho)?;
    let ratio = downstream.rho / upstream.rho;
    let drho = downstream.rho - upstream.rho;
    let dp = plus.p - minus.p;

    let mass = downstream.rho * downstream.v[0] - upstream.rho * upstream.v[0];
    let mass_scale = (downstream.rho * downstream.v[0]).abs().max(1e-300);

    let shear_sq =
        downstream.f[0][0] * downstream.f[0][0] + downstream.f[0][1] * downstream.f[0][1];
    let momentum = ratio * (downstream.v[0] * downstream.v[0] - shear_sq) * drho - dp;
    let momentum_scale = dp
        .abs()
        .max((ratio * downstream.v[0] * downstream.v[0] * drho).abs());

    let row2_0 = downstream.f[1][0] - upstream.f[1][0];
    let row2_1 = downstream.f[1][1] - upstream.f[1][1];
    let row2_scale = upstream.f[1][0].abs().max(upstream.f[1][1].abs()).max(1.0);

    let row1_0 = downstream.rho * downstream.f[0][0] - upstream.rho * upstream.f[0][0];
    let row1_1 = downstream.rho * downstream.f[0][1] - upstream.rho * upstream.f[0][1];
    let row1_scale = (upstream.rho * upstream.f[0][0])
        .abs()
        .max((upstream.rho * upstream.f[0][1]).abs())
        .max(1.0);

    Ok([
        mass / mass_scale,
        momentum / momentum_scale.max(1e-300),
        row2_0 / row2_scale,
        row2_1 / row2_scale,
        row1_0 / row1_scale,
        row1_1 / row1_scale,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_eos() -> EquationOfState {
        EquationOfState::polytropic(1.0, 2.0).unwrap()
    }

    #[test]
    fn reference_compressive_solve() {
        // Frozen against hand evaluation for p = rho^2, rho- = 1,
        // F- = diag(0.3, 0.6), rho+ = 1.5.
        let up = SideState {
            rho: 1.0,
            v: [0.0, 0.0],
            f: [[0.3, 0.0], [0.0, 0.6]],
        };
        let sol = solve_rankine_hugoniot(&up, 1.5, &quadratic_eos(), false).unwrap();
        assert!(sol.compressive);
        let p = &sol.params;
        assert!((p.density_ratio - 1.5).abs() < 1e-15);
        assert!((p.f11() - 0.11547005383792514).abs() < 1e-12);
        assert!((p.f22() - 0.34641016151377546).abs() < 1e-12);
        assert!((p.mach - 0.7542472332656508).abs() < 1e-12);
        assert!((p.upstream_mach.unwrap() - 1.3856406460551018).abs() < 1e-12);
        assert!((sol.downstream.v[0] - 1.3063945294843617).abs() < 1e-12);
        assert!((sol.upstream.v[0] - 1.5 * sol.downstream.v[0]).abs() < 1e-14);

        let res = rh_residuals(&sol.upstream, &sol.downstream, &quadratic_eos()).unwrap();
        for r in res {
            assert!(r.abs() < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn rarefaction_side_solved_but_tagged() {
        let up = SideState {
            rho: 1.5,
            v: [0.0, 0.2],
            f: [[0.3, 0.0], [0.0, 0.6]],
        };
        let sol = solve_rankine_hugoniot(&up, 1.0, &quadratic_eos(), false).unwrap();
        assert!(!sol.compressive);
        assert!((sol.params.density_ratio - 1.0 / 1.5).abs() < 1e-15);
        let res = rh_residuals(&sol.upstream, &sol.downstream, &quadratic_eos()).unwrap();
        for r in res {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_jump_is_degenerate() {
        let up = SideState {
            rho: 1.0,
            v: [0.0, 0.0],
            f: [[0.3, 0.0], [0.0, 0.6]],
        };
        assert!(matches!(
            solve_rankine_hugoniot(&up, 1.0, &quadratic_eos(), false),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn gas_limit_recovers_acoustic_scaling() {
        // With F- = 0 the deformation drops out: M_tilde = M for the
        // dimensionless front.
        let up = SideState {
            rho: 1.0,
            v: [0.0, 0.0],
            f: [[0.0, 0.0], [0.0, 0.0]],
        };
        let sol = solve_rankine_hugoniot(&up, 2.0, &quadratic_eos(), true).unwrap();
        assert_eq!(sol.params.deformation, [[0.0, 0.0], [0.0, 0.0]]);
        // v1+^2 = dp / (R drho) = 3 / 2, c+^2 = 4 => M^2 = 3/8.
        assert!((sol.params.mach - (0.375_f64).sqrt()).abs() < 1e-14);
        assert!(matches!(
            solve_rankine_hugoniot(&up, 2.0, &quadratic_eos(), false),
            Err(Error::DegenerateDeformation { .. })
        ));
    }

    #[test]
    fn tangential_velocity_carried_through() {
        let up = SideState {
            rho: 1.0,
            v: [0.0, -0.7],
            f: [[0.3, 0.1], [0.2, 0.6]],
        };
        let sol = solve_rankine_hugoniot(&up, 1.4, &quadratic_eos(), false).unwrap();
        assert_eq!(sol.upstream.v[1], -0.7);
        assert_eq!(sol.downstream.v[1], -0.7);
    }
}
