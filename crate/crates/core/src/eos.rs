//! Isentropic pressure laws: the polytropic family and tabulated data with
//! monotone cubic interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pressure law `p = p(rho)` for the isentropic model.
///
/// The tabulated variant is interpolated with a monotonicity-preserving
/// cubic (Fritsch-Carlson slopes), so a strictly increasing table yields a
/// strictly positive `dp/drho` everywhere in range.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EquationOfState {
    /// `p(rho) = A rho^gamma` with `A > 0`, `gamma > 1`.
    Polytropic {
        #[serde(rename = "A")]
        a: f64,
        gamma: f64,
    },
    /// Sampled `(rho_i, p_i)` pairs; `rho` strictly increasing.
    Table { rho: Vec<f64>, p: Vec<f64> },
}

/// One evaluation of the pressure law.
#[derive(Debug, Clone, Copy)]
pub struct EosPoint {
    /// Pressure `p(rho)`.
    pub p: f64,
    /// Squared sound speed `dp/drho`.
    pub c_squared: f64,
    /// Whether the law looks convex (`d2p/drho2 >= 0`) around this point.
    pub convex: bool,
}

impl EquationOfState {
    /// Polytropic law, validated.
    pub fn polytropic(a: f64, gamma: f64) -> Result<Self> {
        let eos = EquationOfState::Polytropic { a, gamma };
        eos.validate()?;
        Ok(eos)
    }

    /// Tabulated law, validated.
    pub fn table(rho: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        let eos = EquationOfState::Table { rho, p };
        eos.validate()?;
        Ok(eos)
    }

    /// Check the type invariants. Deserialized values must be validated
    /// before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            EquationOfState::Polytropic { a, gamma } => {
                if !a.is_finite() || !gamma.is_finite() {
                    return Err(Error::InvalidParameter(
                        "polytropic coefficients must be finite".into(),
                    ));
                }
                if *a <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "polytropic coefficient A = {a} must be positive"
                    )));
                }
                if *gamma <= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "polytropic exponent gamma = {gamma} must exceed 1"
                    )));
                }
                Ok(())
            }
            EquationOfState::Table { rho, p } => {
                if rho.len() != p.len() {
                    return Err(Error::InvalidParameter(format!(
                        "table lengths differ: {} densities vs {} pressures",
                        rho.len(),
                        p.len()
                    )));
                }
                if rho.len() < 2 {
                    return Err(Error::InvalidParameter(
                        "table needs at least two samples".into(),
                    ));
                }
                if rho.iter().chain(p.iter()).any(|x| !x.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "table entries must be finite".into(),
                    ));
                }
                for w in rho.windows(2) {
                    if w[1] <= w[0] {
                        return Err(Error::InvalidParameter(format!(
                            "table densities must be strictly increasing ({} then {})",
                            w[0], w[1]
                        )));
                    }
                }
                // Hyperbolicity requires dp/drho > 0, so flat or decreasing
                // pressure segments are rejected up front, pointing at the
                // density where the slope degenerates.
                for (i, w) in p.windows(2).enumerate() {
                    if w[1] <= w[0] {
                        return Err(Error::NonHyperbolic {
                            rho: rho[i + 1],
                            dpdrho: (w[1] - w[0]) / (rho[i + 1] - rho[i]),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// Evaluate pressure and squared sound speed at `rho`.
    pub fn eval(&self, rho: f64) -> Result<EosPoint> {
        if !rho.is_finite() || rho <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "density must be positive and finite, got {rho}"
            )));
        }
        match self {
            EquationOfState::Polytropic { a, gamma } => {
                let p = a * rho.powf(*gamma);
                let c_squared = a * gamma * rho.powf(gamma - 1.0);
                // gamma > 1 makes p'' = A g (g-1) rho^(g-2) >= 0 everywhere.
                Ok(EosPoint {
                    p,
                    c_squared,
                    convex: true,
                })
            }
            EquationOfState::Table { rho: xs, p: ps } => {
                let (lo, hi) = (xs[0], xs[xs.len() - 1]);
                if rho < lo || rho > hi {
                    return Err(Error::OutOfRange { rho, lo, hi });
                }
                let slopes = pchip_slopes(xs, ps);
                let i = interval_index(xs, rho);
                let (p, dp) = hermite_eval(
                    xs[i],
                    xs[i + 1],
                    ps[i],
                    ps[i + 1],
                    slopes[i],
                    slopes[i + 1],
                    rho,
                );
                if dp <= 0.0 {
                    return Err(Error::NonHyperbolic { rho, dpdrho: dp });
                }
                Ok(EosPoint {
                    p,
                    c_squared: dp,
                    convex: self.is_convex(),
                })
            }
        }
    }

    /// Whether the law is convex in density. Polytropic laws with
    /// `gamma > 1` always are; tables are checked through their second
    /// divided differences.
    pub fn is_convex(&self) -> bool {
        match self {
            EquationOfState::Polytropic { .. } => true,
            EquationOfState::Table { rho, p } => {
                let mut max_slope: f64 = 0.0;
                let mut deltas = Vec::with_capacity(rho.len() - 1);
                for i in 0..rho.len() - 1 {
                    let d = (p[i + 1] - p[i]) / (rho[i + 1] - rho[i]);
                    max_slope = max_slope.max(d.abs());
                    deltas.push(d);
                }
                let tol = 1e-10 * max_slope.max(1.0);
                deltas.windows(2).all(|w| w[1] - w[0] >= -tol)
            }
        }
    }
}

/// Largest index `i` with `xs[i] <= x < xs[i+1]` (clamped to the last cell).
fn interval_index(xs: &[f64], x: f64) -> usize {
    match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i.min(xs.len() - 2),
        Err(i) => i.saturating_sub(1).min(xs.len() - 2),
    }
}

/// Fritsch-Carlson slopes: weighted harmonic means inside, one-sided
/// three-point estimates at the ends, clipped to preserve monotonicity.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = ys
        .windows(2)
        .zip(&h)
        .map(|(w, h)| (w[1] - w[0]) / h)
        .collect();
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    m[0] = endpoint_slope(h[0], h[1.min(n - 2)], d[0], d[1.min(n - 2)]);
    m[n - 1] = endpoint_slope(
        h[n - 2],
        h[n.saturating_sub(3).min(n - 2)],
        d[n - 2],
        d[n.saturating_sub(3).min(n - 2)],
    );
    m
}

fn endpoint_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let mut m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        m = 0.0;
    } else if d0 * d1 < 0.0 && m.abs() > 3.0 * d0.abs() {
        m = 3.0 * d0;
    }
    m
}

/// Cubic Hermite value and first derivative on `[x0, x1]`.
#[allow(clippy::too_many_arguments)]
fn hermite_eval(x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let value = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
    let d00 = (6.0 * t2 - 6.0 * t) / h;
    let d10 = 3.0 * t2 - 4.0 * t + 1.0;
    let d01 = (6.0 * t - 6.0 * t2) / h;
    let d11 = 3.0 * t2 - 2.0 * t;
    let deriv = d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1;
    (value, deriv)
}
