//! Quadratic symmetrizer for the reduced boundary system: companion
//! linearization of the 3x3 matrix quadratic, a dense Lyapunov solve for the
//! certificate matrix, assembly of the three 9x9 symmetrizer blocks through
//! two independent constructions, and a randomized dissipativity probe.

use nalgebra::{DMatrix, DVector, Matrix2, SMatrix};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scales::DerivedScales;

pub type Matrix3 = SMatrix<f64, 3, 3>;
pub type Matrix6 = SMatrix<f64, 6, 6>;
pub type Matrix9 = SMatrix<f64, 9, 9>;
pub type Matrix12x9 = SMatrix<f64, 12, 9>;

/// The matrix quadratic `A d^2/dz^2 - 2 B d/dz + (A + C)` governing the
/// reduced boundary system, its companion linearization `G`, and the
/// spectrum of `G`.
#[derive(Debug, Clone)]
pub struct BoundaryQuadratic {
    pub a_mat: Matrix3,
    pub b_mat: Matrix3,
    pub c_mat: Matrix3,
    /// Companion form `[[2 (A-C)^{-1} B, -(A-C)^{-1}(A+C)], [I, 0]]`.
    pub g: Matrix6,
    pub g_eigenvalues: Vec<Complex64>,
}

/// Assemble the 3x3 coefficient matrices and the companion matrix `G` for
/// the free parameter `alpha > 1`.
pub fn build_g(scales: &DerivedScales, alpha: f64) -> Result<BoundaryQuadratic> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "free parameter alpha must exceed 1, got {alpha}"
        )));
    }
    let m = scales.mach();
    let m_star = scales.m_star;
    let beta_sq = scales.beta_sq();
    let (a1, a2) = (scales.a1, scales.a2);
    let d0_tilde = scales.d0_tilde;

    let a_mat = Matrix3::new(
        1.0,
        alpha,
        0.0, //
        0.0,
        0.0,
        0.0, //
        0.0,
        1.0,
        m * a2,
    );
    let b_mat = Matrix3::new(
        -alpha,
        -1.0,
        0.0, //
        0.0,
        0.0,
        -1.0, //
        0.0,
        -m * d0_tilde,
        -m_star * a2,
    );
    let c_mat = Matrix3::new(
        0.0,
        0.0,
        -1.0, //
        0.0,
        1.0,
        0.0, //
        0.0,
        0.0,
        -m * a1 / beta_sq,
    );

    let diff = a_mat - c_mat;
    let det = diff.determinant();
    if det.abs() <= 1e-12 {
        return Err(Error::SingularBlock { det });
    }
    let inv = diff.try_inverse().ok_or(Error::SingularBlock { det })?;
    let g1 = 2.0 * inv * b_mat;
    let g2 = inv * (a_mat + c_mat);

    let mut g = Matrix6::zeros();
    g.fixed_view_mut::<3, 3>(0, 0).copy_from(&g1);
    g.fixed_view_mut::<3, 3>(0, 3).copy_from(&(-g2));
    g.fixed_view_mut::<3, 3>(3, 0)
        .copy_from(&Matrix3::identity());

    let g_eigenvalues: Vec<Complex64> = g.complex_eigenvalues().iter().copied().collect();
    Ok(BoundaryQuadratic {
        a_mat,
        b_mat,
        c_mat,
        g,
        g_eigenvalues,
    })
}

/// Solve `G^T H + H G = -G0` for symmetric `H` by a dense vectorized solve
/// with one round of iterative refinement. Requires the spectrum of `G` in
/// the open left half-plane and a symmetric positive definite `G0`.
pub fn solve_lyapunov(g: &Matrix6, g0: &Matrix6) -> Result<Matrix6> {
    let g0_defect = (g0 - g0.transpose()).norm();
    if g0_defect > 1e-12 * g0.norm().max(1.0) {
        return Err(Error::AsymmetricInput { defect: g0_defect });
    }
    let g0_min_eig = g0
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if g0_min_eig <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "right-hand side must be positive definite; smallest eigenvalue {g0_min_eig}"
        )));
    }
    let max_re = g
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_re >= 0.0 {
        return Err(Error::SpectrumNotStable { max_re });
    }

    // Vectorize: (I (x) G^T + G^T (x) I) vec(H) = vec(-G0), column-major.
    let gt = DMatrix::<f64>::from_fn(6, 6, |i, j| g[(j, i)]);
    let eye = DMatrix::<f64>::identity(6, 6);
    let system = eye.kronecker(&gt) + gt.kronecker(&eye);
    let lu = system.clone().lu();
    let rhs = DVector::<f64>::from_iterator(36, (-g0).iter().cloned());
    let mut h_vec = lu
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("Lyapunov system is singular".into()))?;

    let to_matrix = |v: &DVector<f64>| Matrix6::from_iterator(v.iter().cloned());
    let residual_of = |h: &Matrix6| g.transpose() * h + h * g + g0;

    // One refinement pass tightens the residual near the stability boundary.
    for _ in 0..2 {
        let h = to_matrix(&h_vec);
        let res = residual_of(&h);
        if res.norm() <= 1e-14 * g0.norm() {
            break;
        }
        let res_vec = DVector::<f64>::from_iterator(36, (-res).iter().cloned());
        if let Some(delta) = lu.solve(&res_vec) {
            h_vec += delta;
        } else {
            break;
        }
    }

    let mut h = to_matrix(&h_vec);
    h = 0.5 * (h + h.transpose());
    let final_residual = residual_of(&h).norm();
    if final_residual > 1e-10 * g0.norm().max(1.0) {
        return Err(Error::IllConditioned(format!(
            "Lyapunov residual {final_residual} exceeds tolerance"
        )));
    }
    Ok(h)
}

/// Split a symmetric 6x6 certificate into the four 3x3 blocks that build the
/// symmetrizer: `K = (H1 + H3)/2`, `M = (H3 - H1)/2`, `L = -(H2 + H2^T)/2`,
/// and the antisymmetric `N = (H2^T - H2)/2`.
pub fn split_blocks(h: &Matrix6) -> Result<(Matrix3, Matrix3, Matrix3, Matrix3)> {
    let defect = (h - h.transpose()).norm();
    if defect > 1e-10 * h.norm().max(1.0) {
        return Err(Error::AsymmetricInput { defect });
    }
    let h1: Matrix3 = h.fixed_view::<3, 3>(0, 0).into();
    let h2: Matrix3 = h.fixed_view::<3, 3>(0, 3).into();
    let h3: Matrix3 = h.fixed_view::<3, 3>(3, 3).into();
    let k = 0.5 * (h1 + h3);
    let m = 0.5 * (h3 - h1);
    let l = -0.5 * (h2 + h2.transpose());
    let n = 0.5 * (h2.transpose() - h2);
    Ok((k, l, m, n))
}

/// The fixed 12x9 selection matrix relating the stacked second-order
/// variables to the first-order ones.
pub fn t_matrix() -> Matrix12x9 {
    let p = SMatrix::<f64, 4, 3>::new(
        1.0, 0.0, -1.0, //
        0.0, -1.0, 0.0, //
        0.0, -1.0, 0.0, //
        1.0, 0.0, 1.0,
    );
    let eye = Matrix3::identity();
    let mut t = Matrix12x9::zeros();
    for bi in 0..4 {
        for bj in 0..3 {
            let scaled = eye * (p[(bi, bj)] / 2.0_f64.sqrt());
            t.fixed_view_mut::<3, 3>(3 * bi, 3 * bj).copy_from(&scaled);
        }
    }
    t
}

fn place(b: &mut Matrix9, bi: usize, bj: usize, block: &Matrix3) {
    b.fixed_view_mut::<3, 3>(3 * bi, 3 * bj).copy_from(block);
}

/// The three symmetrizer blocks written directly in terms of the split
/// blocks of `H`.
pub fn b_matrices_from_blocks(
    k: &Matrix3,
    l: &Matrix3,
    m: &Matrix3,
    n: &Matrix3,
) -> (Matrix9, Matrix9, Matrix9) {
    let mut b0 = Matrix9::zeros();
    place(&mut b0, 0, 0, k);
    place(&mut b0, 0, 1, l);
    place(&mut b0, 0, 2, m);
    place(&mut b0, 1, 0, l);
    place(&mut b0, 1, 1, k);
    place(&mut b0, 1, 2, n);
    place(&mut b0, 2, 0, m);
    place(&mut b0, 2, 1, &(-n));
    place(&mut b0, 2, 2, k);

    let mut b1 = Matrix9::zeros();
    place(&mut b1, 0, 0, l);
    place(&mut b1, 0, 1, k);
    place(&mut b1, 0, 2, n);
    place(&mut b1, 1, 0, k);
    place(&mut b1, 1, 1, l);
    place(&mut b1, 1, 2, m);
    place(&mut b1, 2, 0, &(-n));
    place(&mut b1, 2, 1, m);
    place(&mut b1, 2, 2, &(-l));

    let mut b2 = Matrix9::zeros();
    place(&mut b2, 0, 0, m);
    place(&mut b2, 0, 1, &(-n));
    place(&mut b2, 0, 2, k);
    place(&mut b2, 1, 0, n);
    place(&mut b2, 1, 1, &(-m));
    place(&mut b2, 1, 2, l);
    place(&mut b2, 2, 0, k);
    place(&mut b2, 2, 1, l);
    place(&mut b2, 2, 2, m);

    (b0, b1, b2)
}

/// The same three blocks through the congruence `T^T (J (x) H) T` with the
/// three fixed 2x2 kernels. Serves as the independent construction.
pub fn b_matrices_factored(h: &Matrix6) -> (Matrix9, Matrix9, Matrix9) {
    let t = t_matrix();
    let kernels = [
        Matrix2::new(1.0, 0.0, 0.0, 1.0),
        Matrix2::new(0.0, -1.0, -1.0, 0.0),
        Matrix2::new(-1.0, 0.0, 0.0, 1.0),
    ];
    let mut out = [Matrix9::zeros(); 3];
    for (slot, j) in out.iter_mut().zip(kernels.iter()) {
        let big = j.kronecker(h);
        *slot = t.transpose() * big * t;
    }
    (out[0], out[1], out[2])
}

/// Everything produced by a successful symmetrizer construction, including
/// the certificates a caller needs to audit it.
#[derive(Debug, Clone)]
pub struct SymmetrizerBundle {
    pub alpha: f64,
    pub quadratic: BoundaryQuadratic,
    pub g0: Matrix6,
    pub h: Matrix6,
    pub k_block: Matrix3,
    pub l_block: Matrix3,
    pub m_block: Matrix3,
    pub n_block: Matrix3,
    pub b0: Matrix9,
    pub b1: Matrix9,
    pub b2: Matrix9,
    /// Weighted combination `(M / beta^2) (M* B0 + M B1)`, positive definite
    /// whenever `H` is.
    pub b0_tilde: Matrix9,
    pub t_mat: Matrix12x9,
    /// Smallest eigenvalue of `H`.
    pub h_min_eigenvalue: f64,
    /// Smallest eigenvalue of the weighted block.
    pub b0_tilde_min_eigenvalue: f64,
    /// Frobenius norm of `G^T H + H G + G0` after the solve.
    pub lyapunov_residual: f64,
    /// Relative symmetry defect of `H` before symmetrization.
    pub symmetry_defect: f64,
    /// Largest real part in the spectrum of `G`.
    pub g_max_real_part: f64,
}

impl SymmetrizerBundle {
    /// The construction certifies dissipativity when the spectrum is
    /// stable and both quadratic forms are positive definite beyond the
    /// reporting threshold.
    pub fn certified(&self) -> bool {
        self.g_max_real_part < 0.0
            && self.h_min_eigenvalue > 1e-10
            && self.b0_tilde_min_eigenvalue > 0.0
    }
}

/// Full pipeline: companion matrix, Lyapunov certificate, block split, and
/// both symmetrizer constructions cross-checked against each other.
pub fn assemble_symmetrizer(
    scales: &DerivedScales,
    alpha: f64,
    g0: &Matrix6,
) -> Result<SymmetrizerBundle> {
    let quadratic = build_g(scales, alpha)?;
    let h = solve_lyapunov(&quadratic.g, g0)?;
    let symmetry_defect = {
        // h is symmetrized inside the solver; report the residual defect.
        (h - h.transpose()).norm() / h.norm().max(1.0)
    };
    let (k, l, m, n) = split_blocks(&h)?;
    let (b0, b1, b2) = b_matrices_from_blocks(&k, &l, &m, &n);
    let (f0, f1, f2) = b_matrices_factored(&h);
    let scale = h.norm().max(1.0);
    let agreement = (b0 - f0).norm().max((b1 - f1).norm()).max((b2 - f2).norm());
    if agreement > 1e-12 * scale {
        return Err(Error::Numerical(format!(
            "symmetrizer constructions disagree by {agreement}"
        )));
    }
    let mach = scales.mach();
    let b0_tilde = (mach / scales.beta_sq()) * (scales.m_star * b0 + mach * b1);

    let h_min_eigenvalue = h
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let b0_tilde_min_eigenvalue = b0_tilde
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let lyapunov_residual = (quadratic.g.transpose() * h + h * quadratic.g + g0).norm();
    let g_max_real_part = quadratic
        .g_eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(SymmetrizerBundle {
        alpha,
        quadratic,
        g0: *g0,
        h,
        k_block: k,
        l_block: l,
        m_block: m,
        n_block: n,
        b0,
        b1,
        b2,
        b0_tilde,
        t_mat: t_matrix(),
        h_min_eigenvalue,
        b0_tilde_min_eigenvalue,
        lyapunov_residual,
        symmetry_defect,
        g_max_real_part,
    })
}

/// Result of sampling the boundary dissipation form over random admissible
/// directions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProbeReport {
    /// Smallest sampled value of the form per unit squared trace norm.
    pub min_value: f64,
    /// Largest relative mismatch between the form and its closed
    /// Lyapunov-side expression.
    pub max_identity_error: f64,
    pub samples: usize,
}

/// Sample the dissipation quadratic form `W . B1 W` over random directions
/// compatible with the boundary reduction (`V_I = G V_II` with unit
/// `V_II`), cross-checking each sample against `V_II . G0 V_II`.
pub fn dissipativity_probe<R: Rng + ?Sized>(
    bundle: &SymmetrizerBundle,
    samples: usize,
    rng: &mut R,
) -> ProbeReport {
    let sqrt_half = 0.5_f64.sqrt();
    let mut min_value = f64::INFINITY;
    let mut max_identity_error: f64 = 0.0;
    let mut drawn = 0usize;
    while drawn < samples {
        let mut v_ii = [0.0; 6];
        for entry in v_ii.iter_mut() {
            *entry = rng.gen_range(-1.0..1.0);
        }
        let norm = v_ii.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        drawn += 1;
        for entry in v_ii.iter_mut() {
            *entry /= norm;
        }
        let v_ii = nalgebra::SVector::<f64, 6>::from_column_slice(&v_ii);
        let v_i = bundle.quadratic.g * v_ii;

        // Stacked 12-vector (V1, V2, V3, V4) = (V_I, V_II); rebuild the
        // 9-vector W from the selection relations.
        let mut w = nalgebra::SVector::<f64, 9>::zeros();
        for idx in 0..3 {
            let v1 = v_i[idx];
            let v2 = v_i[3 + idx];
            let v4 = v_ii[3 + idx];
            w[idx] = sqrt_half * (v1 + v4);
            w[3 + idx] = -2.0_f64.sqrt() * v2;
            w[6 + idx] = sqrt_half * (v4 - v1);
        }
        let quad = (w.transpose() * bundle.b1 * w)[(0, 0)];
        let reference = (v_ii.transpose() * bundle.g0 * v_ii)[(0, 0)];
        let err = (quad - reference).abs() / reference.abs().max(1.0);
        min_value = min_value.min(quad);
        max_identity_error = max_identity_error.max(err);
    }
    ProbeReport {
        min_value,
        max_identity_error,
        samples: drawn,
    }
}
