//! Frozen-coefficient symbols of the interior hyperbolic operator and the
//! linearized jump conditions, in the nondimensional frame attached to the
//! front.
//!
//! State ordering throughout: `(p, v1, v2, F11, F21, F12, F22)`.

use nalgebra::{DMatrix, DVector, SMatrix};
use num_complex::Complex64;

use crate::scales::DerivedScales;

pub type RealState = SMatrix<f64, 7, 7>;
pub type RealBoundary = SMatrix<f64, 6, 7>;
pub type ComplexState = SMatrix<Complex64, 7, 7>;
pub type ComplexBoundary = SMatrix<Complex64, 6, 7>;

/// The constant matrices entering the interior symbol
/// `S(s, lambda, omega) = s A0 + lambda A1 + i omega A2` and the boundary
/// symbol `B(s, omega) = s B0 + i omega B2 + BC`.
#[derive(Debug, Clone)]
pub struct SymbolSet {
    pub a0: RealState,
    pub a1: RealState,
    pub a2: RealState,
    pub bnd0: RealBoundary,
    pub bnd2: RealBoundary,
    pub bndc: RealBoundary,
}

/// Assemble every constant symbol matrix for the given downstream scales.
pub fn assemble_symbols(scales: &DerivedScales) -> SymbolSet {
    let m = scales.mach();
    let m_sq = m * m;
    let r = scales.density_ratio();
    let (f11, f12, f21, f22) = (scales.f11(), scales.f12(), scales.f21(), scales.f22());
    let ell0 = scales.ell0;
    let (d0, a0_coef) = (scales.d0, scales.a0);

    let a0 = RealState::from_diagonal(&SMatrix::<f64, 7, 1>::from_column_slice(&[
        1.0, m_sq, m_sq, 1.0, 1.0, 1.0, 1.0,
    ]));

    #[rustfmt::skip]
    let a1 = RealState::from_row_slice(&[
        1.0,  1.0,   0.0,   0.0,  0.0,  0.0,  0.0,
        1.0,  m_sq,  0.0,  -f11,  0.0, -f12,  0.0,
        0.0,  0.0,   m_sq,  0.0, -f11,  0.0, -f12,
        0.0, -f11,   0.0,   1.0,  0.0,  0.0,  0.0,
        0.0,  0.0,  -f11,   0.0,  1.0,  0.0,  0.0,
        0.0, -f12,   0.0,   0.0,  0.0,  1.0,  0.0,
        0.0,  0.0,  -f12,   0.0,  0.0,  0.0,  1.0,
    ]);

    #[rustfmt::skip]
    let a2 = RealState::from_row_slice(&[
        0.0,  0.0,   1.0,   0.0,  0.0,  0.0,  0.0,
        0.0,  0.0,   0.0,  -f21,  0.0, -f22,  0.0,
        1.0,  0.0,   0.0,   0.0, -f21,  0.0, -f22,
        0.0, -f21,   0.0,   0.0,  0.0,  0.0,  0.0,
        0.0,  0.0,  -f21,   0.0,  0.0,  0.0,  0.0,
        0.0, -f22,   0.0,   0.0,  0.0,  0.0,  0.0,
        0.0,  0.0,  -f22,   0.0,  0.0,  0.0,  0.0,
    ]);

    let mut bnd0 = RealBoundary::zeros();
    bnd0[(1, 2)] = 1.0;

    let mut bnd2 = RealBoundary::zeros();
    bnd2[(1, 0)] = -a0_coef;
    bnd2[(1, 2)] = -ell0 / m_sq;

    #[rustfmt::skip]
    let bndc = RealBoundary::from_row_slice(&[
        d0,   1.0, -ell0 / (m_sq * r), 0.0, 0.0, 0.0, 0.0,
        0.0,  0.0,  0.0,               0.0, 0.0, 0.0, 0.0,
        f11,  0.0, -f21 / r,           1.0, 0.0, 0.0, 0.0,
        f12,  0.0, -f22 / r,           0.0, 0.0, 1.0, 0.0,
        0.0,  0.0, -f11,               0.0, 1.0, 0.0, 0.0,
        0.0,  0.0, -f12,               0.0, 0.0, 0.0, 1.0,
    ]);

    SymbolSet {
        a0,
        a1,
        a2,
        bnd0,
        bnd2,
        bndc,
    }
}

impl SymbolSet {
    /// Interior symbol `s A0 + lambda A1 + i omega A2`.
    pub fn interior_symbol(&self, s: Complex64, lambda: Complex64, omega: f64) -> ComplexState {
        let i_omega = Complex64::new(0.0, omega);
        let mut out = ComplexState::zeros();
        for idx in 0..49 {
            out[idx] = s * self.a0[idx] + lambda * self.a1[idx] + i_omega * self.a2[idx];
        }
        out
    }

    /// Boundary symbol `s B0 + i omega B2 + BC` after front elimination.
    pub fn boundary_symbol(&self, s: Complex64, omega: f64) -> ComplexBoundary {
        let i_omega = Complex64::new(0.0, omega);
        let mut out = ComplexBoundary::zeros();
        for idx in 0..42 {
            out[idx] =
                s * self.bnd0[idx] + i_omega * self.bnd2[idx] + Complex64::new(self.bndc[idx], 0.0);
        }
        out
    }

    /// Determinant of the interior symbol.
    pub fn symbol_det(&self, s: Complex64, lambda: Complex64, omega: f64) -> Complex64 {
        self.interior_symbol(s, lambda, omega).determinant()
    }

    /// Interior symbol as a dynamically sized matrix for kernel extraction.
    pub fn interior_symbol_dyn(
        &self,
        s: Complex64,
        lambda: Complex64,
        omega: f64,
    ) -> DMatrix<Complex64> {
        let fixed = self.interior_symbol(s, lambda, omega);
        DMatrix::from_fn(7, 7, |i, j| fixed[(i, j)])
    }

    /// Boundary symbol as a dynamically sized matrix.
    pub fn boundary_symbol_dyn(&self, s: Complex64, omega: f64) -> DMatrix<Complex64> {
        let fixed = self.boundary_symbol(s, omega);
        DMatrix::from_fn(6, 7, |i, j| fixed[(i, j)])
    }

    /// Apply the (real, symmetric) normal-flux symbol `A1` to a complex
    /// state vector.
    pub fn apply_a1(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::<Complex64>::zeros(7);
        for i in 0..7 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..7 {
                acc += self.a1[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }
}
