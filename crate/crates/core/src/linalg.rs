//! Small dense complex linear-algebra helpers: stable quadratic roots,
//! one-sided Jacobi orthogonalization for singular values / kernel
//! directions, and greedy column pivoting for row selection.
//!
//! The matrices here are at most 7x7, so simplicity and accuracy win over
//! asymptotics. One-sided Jacobi computes small singular values with high
//! relative accuracy, which is exactly what the near-singular boundary
//! symbols need.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Roots of `a z^2 + b z + c = 0` with the usual cancellation-avoiding
/// split: the large root from the stabilized quadratic formula, the small
/// one from the product `c / (a q)`.
pub fn complex_quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    debug_assert!(a.norm() > 0.0, "leading coefficient must not vanish");
    let disc = b * b - 4.0 * a * c;
    let mut sq = disc.sqrt();
    // Pick the square-root branch that adds constructively to b.
    if (b.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let q = -0.5 * (b + sq);
    if q.norm() == 0.0 {
        // b = 0 and c = 0 (or disc chosen zero): double root at the vertex.
        let r = -b / (2.0 * a);
        return (r, r);
    }
    (q / a, c / q)
}

/// Right singular structure of a complex matrix: singular values in
/// descending order and the matching right singular vectors as columns.
pub struct RightSingular {
    pub sigmas: Vec<f64>,
    pub v: DMatrix<Complex64>,
}

/// One-sided Jacobi on the columns of `a` (rows padded with zeros when
/// `a` is wide, which appends exact zero singular values whose right
/// vectors span the kernel).
pub fn right_singular(a: &DMatrix<Complex64>) -> RightSingular {
    let n = a.ncols();
    let rows = a.nrows().max(n);
    let mut u = DMatrix::<Complex64>::zeros(rows, n);
    u.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let mut v = DMatrix::<Complex64>::identity(n, n);

    let eps = 1e-14;
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for k in 0..rows {
                    let ui = u[(k, i)];
                    let uj = u[(k, j)];
                    alpha += ui.norm_sqr();
                    beta += uj.norm_sqr();
                    gamma += ui.conj() * uj;
                }
                let g = gamma.norm();
                let scale = (alpha * beta).sqrt();
                if g <= eps * scale || scale == 0.0 {
                    continue;
                }
                rotated = true;
                let d = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                let dc = d.conj();
                for k in 0..rows {
                    let ui = u[(k, i)];
                    let uj = u[(k, j)] * dc;
                    u[(k, i)] = cth * ui - sth * uj;
                    u[(k, j)] = sth * ui + cth * uj;
                }
                for k in 0..n {
                    let vi = v[(k, i)];
                    let vj = v[(k, j)] * dc;
                    v[(k, i)] = cth * vi - sth * vj;
                    v[(k, j)] = sth * vi + cth * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|k| u.column(k).norm()).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());
    let sigmas: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let mut vs = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vs.set_column(dst, &v.column(src));
    }
    RightSingular { sigmas, v: vs }
}

/// Smallest right singular direction together with all singular values.
/// For a wide matrix the returned vector spans the kernel exactly.
pub fn kernel_direction(a: &DMatrix<Complex64>) -> (Vec<f64>, DVector<Complex64>) {
    let dec = right_singular(a);
    let n = dec.v.ncols();
    let kernel = DVector::from_column_slice(dec.v.column(n - 1).as_slice());
    (dec.sigmas, kernel)
}

/// Rotate a vector's phase so its first component above `threshold` in
/// modulus becomes real and positive; no-op for the zero vector.
pub fn fix_phase(v: &mut DVector<Complex64>, threshold: f64) {
    let pivot = v
        .iter()
        .find(|z| z.norm() > threshold)
        .copied()
        .or_else(|| {
            v.iter()
                .cloned()
                .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        });
    if let Some(z) = pivot {
        let r = z.norm();
        if r > 0.0 {
            let phase = z.conj() / r;
            for entry in v.iter_mut() {
                *entry *= phase;
            }
        }
    }
}

/// Greedy modified-Gram-Schmidt pivot order over the columns of `a`: most
/// independent columns first, so the final index is the most linearly
/// dependent one.
pub fn column_pivot_order(a: &DMatrix<Complex64>) -> Vec<usize> {
    let n = a.ncols();
    let mut residual = a.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let (pos, &best) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, &i), (_, &j)| {
                residual
                    .column(i)
                    .norm()
                    .partial_cmp(&residual.column(j).norm())
                    .unwrap()
            })
            .unwrap();
        remaining.remove(pos);
        order.push(best);
        let norm = residual.column(best).norm();
        if norm == 0.0 {
            continue;
        }
        let q = residual.column(best) / Complex64::new(norm, 0.0);
        for &k in &remaining {
            let proj = q.dotc(&residual.column(k));
            let update = &q * proj;
            let mut col = residual.column_mut(k);
            col -= update;
        }
    }
    order
}
