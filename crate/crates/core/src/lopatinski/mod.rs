//! Numerical verification of the uniform boundary-value solvability
//! condition: sweep the forward frequency hemisphere for zeros of the
//! compatibility determinant, polish candidates with a damped Gauss-Newton
//! iteration, and classify the front as uniformly stable, neutrally stable,
//! or violently unstable. Pure-stretching deformations also admit a closed
//! form handled without any sweeping.

pub mod dispersion;
pub mod kernel;
pub mod symbols;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::energy::{detect_pattern, DeformationPattern};
use crate::error::{Error, Result};
use crate::scales::DerivedScales;
use dispersion::lambda_plus;
use kernel::{boundary_kernel, interior_kernel, pairing_value, replaced_determinant};
use symbols::{assemble_symbols, SymbolSet};

/// Laplace-Fourier frequency `(eta, xi, omega)`: `s = eta + i xi` dual to
/// time, `omega` dual to the tangential direction. Growth rates `eta < 0`
/// are never admissible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub eta: f64,
    pub xi: f64,
    pub omega: f64,
}

impl Frequency {
    pub fn new(eta: f64, xi: f64, omega: f64) -> Result<Self> {
        let freq = Frequency { eta, xi, omega };
        freq.validate()?;
        Ok(freq)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.xi.is_finite() && self.omega.is_finite()) {
            return Err(Error::InvalidParameter(
                "frequency components must be finite".into(),
            ));
        }
        if self.eta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "growth rate must be nonnegative, got {}",
                self.eta
            )));
        }
        if self.norm() == 0.0 {
            return Err(Error::InvalidParameter("frequency must be nonzero".into()));
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        (self.eta * self.eta + self.xi * self.xi + self.omega * self.omega).sqrt()
    }

    /// The Laplace variable `s = eta + i xi`.
    pub fn s(&self) -> Complex64 {
        Complex64::new(self.eta, self.xi)
    }

    /// Rescaled to the unit sphere; classification is scale invariant.
    pub fn normalized(&self) -> Frequency {
        let n = self.norm();
        Frequency {
            eta: self.eta / n,
            xi: self.xi / n,
            omega: self.omega / n,
        }
    }

    /// Conjugation maps `(eta, xi, omega)` to `(eta, -xi, -omega)` on the
    /// zero set; the representative with `omega >= 0` is reported.
    pub fn canonical(&self) -> Frequency {
        if self.omega < 0.0 || (self.omega == 0.0 && self.xi < 0.0) {
            Frequency {
                eta: self.eta,
                xi: -self.xi,
                omega: -self.omega,
            }
        } else {
            *self
        }
    }
}

/// Everything computed at a single frequency: the selected decaying root,
/// all dispersion roots, both kernels, and both determinant values.
#[derive(Debug, Clone, Serialize)]
pub struct ModeSolution {
    pub frequency: Frequency,
    pub lambda_plus: Complex64,
    pub roots: Vec<Complex64>,
    pub boundary_kernel: Vec<Complex64>,
    pub interior_kernel: Vec<Complex64>,
    /// Bilinear compatibility value; its zeros are the instability modes.
    pub det_value: Complex64,
    /// Row-replacement determinant sharing the same zero set.
    pub det_replaced: Complex64,
}

/// Assemble the complete mode data at one frequency.
pub fn mode_solution(scales: &DerivedScales, freq: &Frequency) -> Result<ModeSolution> {
    freq.validate()?;
    let sym = assemble_symbols(scales);
    let s = freq.s();
    let lam = lambda_plus(scales, freq)?;
    let roots = dispersion::dispersion_roots(scales, s, freq.omega).to_vec();
    let (u0, _sigmas) = boundary_kernel(&sym, s, freq.omega)?;
    let r = interior_kernel(&sym, s, lam, freq.omega)?;
    let det_value = pairing_value(&sym, &u0, &r);
    let det_replaced = replaced_determinant(&sym, s, lam, freq.omega, &u0)?;
    Ok(ModeSolution {
        frequency: *freq,
        lambda_plus: lam,
        roots,
        boundary_kernel: u0.iter().copied().collect(),
        interior_kernel: r.iter().copied().collect(),
        det_value,
        det_replaced,
    })
}

/// Outcome classes of the frequency-domain test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralClass {
    /// No zeros on the closed forward hemisphere.
    Uniform,
    /// Zeros only on the purely oscillatory boundary.
    Neutral,
    /// A zero with strictly positive growth rate.
    Violent,
}

/// Result of the frequency-domain classification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralVerdict {
    pub class: SpectralClass,
    /// A zero of the compatibility determinant witnessing instability,
    /// canonicalized to `omega >= 0`; absent for uniform verdicts.
    pub witness: Option<Frequency>,
    /// Smallest |det| encountered (after polishing); `None` for closed-form
    /// verdicts that never evaluate the determinant.
    pub min_abs_det: Option<f64>,
    /// Median |det| over the sweep, the scale against which zeros are
    /// judged; `None` for closed-form verdicts.
    pub median_abs_det: Option<f64>,
    /// Set when the two closed-form branch values coincide, which makes the
    /// boundary contact tangential.
    pub branch_coincident: bool,
    pub grid_points: usize,
    pub failed_points: usize,
}

/// Sweep resolutions and tolerances for [`classify_spectral`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Polar steps between the growth axis and the oscillatory boundary.
    pub n_polar: usize,
    /// Azimuthal steps around each polar circle.
    pub n_azimuth: usize,
    /// Steps along the purely oscillatory boundary circle.
    pub n_boundary: usize,
    /// Gauss-Newton iteration cap per candidate.
    pub polish_iterations: usize,
    /// Polished |det| below `zero_rel_tol * median` counts as a zero.
    pub zero_rel_tol: f64,
    /// Minima above `clear_rel_tol * median` count as bounded away from
    /// zero; the band between the two tolerances is inconclusive.
    pub clear_rel_tol: f64,
    /// Growth rates below this are treated as boundary contact.
    pub eta_floor: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_polar: 256,
            n_azimuth: 256,
            n_boundary: 1024,
            polish_iterations: 60,
            zero_rel_tol: 1e-10,
            clear_rel_tol: 1e-8,
            eta_floor: 1e-6,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_polar < 4 || self.n_azimuth < 4 || self.n_boundary < 8 {
            return Err(Error::InvalidParameter(
                "sweep resolutions are too coarse to be meaningful".into(),
            ));
        }
        if !(self.zero_rel_tol > 0.0
            && self.clear_rel_tol > self.zero_rel_tol
            && self.eta_floor > 0.0)
        {
            return Err(Error::InvalidParameter(
                "tolerances must satisfy 0 < zero < clear and a positive floor".into(),
            ));
        }
        Ok(())
    }
}

/// Closed-form classification for pure stretching: the front is uniformly
/// stable when the shear load stays below the two branch thresholds and
/// neutrally stable otherwise, never violently unstable. The neutral
/// witness is the tangency frequency written out explicitly.
pub fn classify_stretching(scales: &DerivedScales) -> Result<SpectralVerdict> {
    let pattern = detect_pattern(scales).ok_or_else(|| {
        Error::PatternMismatch("closed-form classification needs a single-axis deformation".into())
    })?;
    let (d1, d2) = match pattern {
        DeformationPattern::Diagonal => (scales.f11(), scales.f22()),
        DeformationPattern::AntiDiagonal => (scales.f12(), scales.f21()),
    };
    let m_sq = scales.m_sq();
    let r = scales.density_ratio();
    let m_star_sq = 1.0 + d1 * d1;
    let beta_sq = m_star_sq - m_sq;
    if beta_sq <= 0.0 || m_sq - d1 * d1 <= 0.0 {
        return Err(Error::LaxViolated(
            "closed form requires an extreme front".into(),
        ));
    }
    let k = r * (m_sq - d1 * d1) + d2 * d2;
    let k2 = 1.0 + d2 * d2;
    let k1 = m_sq * k2 / m_star_sq;
    let margin = k1 + k2 - k;
    if margin > 0.0 {
        return Ok(SpectralVerdict {
            class: SpectralClass::Uniform,
            witness: None,
            min_abs_det: None,
            median_abs_det: None,
            branch_coincident: false,
            grid_points: 0,
            failed_points: 0,
        });
    }
    let beta = beta_sq.sqrt();
    let m_star = m_star_sq.sqrt();
    let m = m_sq.sqrt();
    let delta = (k - k2).sqrt() / beta;
    let omega_im = m_star * (k - k1).sqrt() / (m * beta);
    let xi = omega_im - delta;
    debug_assert!(xi > 0.0, "tangency frequency must be forward");
    // The contact happens on the branch with the larger decay rate.
    debug_assert!(delta / xi >= m_sq / beta_sq - 1e-9);
    let witness = Frequency {
        eta: 0.0,
        xi,
        omega: 1.0,
    }
    .normalized()
    .canonical();
    let scale = k.abs().max(1.0);
    Ok(SpectralVerdict {
        class: SpectralClass::Neutral,
        witness: Some(witness),
        min_abs_det: None,
        median_abs_det: None,
        branch_coincident: margin.abs() <= 1e-12 * scale,
        grid_points: 0,
        failed_points: 0,
    })
}

const THETA_MIN: f64 = 1e-9;
const THETA_MAX: f64 = FRAC_PI_2 - 1e-9;

fn interior_freq(theta: f64, phi: f64) -> Frequency {
    let theta = theta.clamp(THETA_MIN, THETA_MAX);
    let (sin_t, cos_t) = theta.sin_cos();
    Frequency {
        eta: cos_t,
        xi: sin_t * phi.cos(),
        omega: sin_t * phi.sin(),
    }
}

fn boundary_freq(psi: f64) -> Frequency {
    Frequency {
        eta: 0.0,
        xi: psi.cos(),
        omega: psi.sin(),
    }
}

fn det_at(scales: &DerivedScales, sym: &SymbolSet, freq: &Frequency) -> Result<f64> {
    let s = freq.s();
    let lam = lambda_plus(scales, freq)?;
    let (u0, _) = boundary_kernel(sym, s, freq.omega)?;
    let r = interior_kernel(sym, s, lam, freq.omega)?;
    Ok(pairing_value(sym, &u0, &r).norm())
}

fn complex_det_at(scales: &DerivedScales, sym: &SymbolSet, freq: &Frequency) -> Result<Complex64> {
    let s = freq.s();
    let lam = lambda_plus(scales, freq)?;
    let (u0, _) = boundary_kernel(sym, s, freq.omega)?;
    let r = interior_kernel(sym, s, lam, freq.omega)?;
    Ok(pairing_value(sym, &u0, &r))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

struct Polished {
    freq: Frequency,
    value: f64,
}

/// One evaluated sweep point, suitable for streaming to a row-oriented
/// sink while the classification runs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepSample {
    pub eta: f64,
    pub xi: f64,
    pub omega: f64,
    /// Magnitude of the compatibility determinant; NaN when the evaluation
    /// failed at this point.
    pub abs_det: f64,
    /// How the point participated: 0 = grid evaluation, 1 = failed
    /// evaluation, 2 = polished candidate, 3 = certified zero.
    pub class_flag: u8,
}

impl SweepSample {
    fn at(freq: &Frequency, abs_det: f64, class_flag: u8) -> Self {
        SweepSample {
            eta: freq.eta,
            xi: freq.xi,
            omega: freq.omega,
            abs_det,
            class_flag,
        }
    }
}

/// Two-dimensional damped Gauss-Newton driving the complex determinant to
/// zero in polar coordinates on the hemisphere.
fn polish_interior(
    scales: &DerivedScales,
    sym: &SymbolSet,
    theta0: f64,
    phi0: f64,
    iterations: usize,
) -> Option<Polished> {
    let eval = |theta: f64, phi: f64| -> Option<Complex64> {
        complex_det_at(scales, sym, &interior_freq(theta, phi)).ok()
    };
    let mut theta = theta0.clamp(THETA_MIN, THETA_MAX);
    let mut phi = phi0;
    let mut f = eval(theta, phi)?;
    let h = 3e-6;
    for _ in 0..iterations {
        let ftp = eval((theta + h).min(THETA_MAX), phi)?;
        let ftm = eval((theta - h).max(THETA_MIN), phi)?;
        let dt = ((theta + h).min(THETA_MAX) - (theta - h).max(THETA_MIN)).max(1e-12);
        let fpp = eval(theta, phi + h)?;
        let fpm = eval(theta, phi - h)?;
        let d_theta = (ftp - ftm) / dt;
        let d_phi = (fpp - fpm) / (2.0 * h);
        // Solve the 2x2 real system J d = -F for d = (d theta, d phi).
        let j = [[d_theta.re, d_phi.re], [d_theta.im, d_phi.im]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let rhs = [-f.re, -f.im];
        let step_t = (rhs[0] * j[1][1] - rhs[1] * j[0][1]) / det;
        let step_p = (j[0][0] * rhs[1] - j[1][0] * rhs[0]) / det;
        let mut damping = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let nt = (theta + damping * step_t).clamp(THETA_MIN, THETA_MAX);
            let np = phi + damping * step_p;
            if let Some(nf) = eval(nt, np) {
                if nf.norm() < f.norm() {
                    theta = nt;
                    phi = np;
                    f = nf;
                    advanced = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !advanced {
            break;
        }
        if (step_t.abs() + step_p.abs()) * damping < 1e-13 {
            break;
        }
    }
    Some(Polished {
        freq: interior_freq(theta, phi),
        value: f.norm(),
    })
}

/// One-dimensional damped Gauss-Newton along the oscillatory boundary.
fn polish_boundary(
    scales: &DerivedScales,
    sym: &SymbolSet,
    psi0: f64,
    iterations: usize,
) -> Option<Polished> {
    let eval =
        |psi: f64| -> Option<Complex64> { complex_det_at(scales, sym, &boundary_freq(psi)).ok() };
    let mut psi = psi0;
    let mut f = eval(psi)?;
    let h = 3e-6;
    for _ in 0..iterations {
        let fp = eval(psi + h)?;
        let fm = eval(psi - h)?;
        let deriv = (fp - fm) / (2.0 * h);
        let denom = deriv.norm_sqr();
        if denom < 1e-300 {
            break;
        }
        let step = -(deriv.conj() * f).re / denom;
        let mut damping = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let np = psi + damping * step;
            if let Some(nf) = eval(np) {
                if nf.norm() < f.norm() {
                    psi = np;
                    f = nf;
                    advanced = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !advanced {
            break;
        }
        if (step * damping).abs() < 1e-13 {
            break;
        }
    }
    Some(Polished {
        freq: boundary_freq(psi),
        value: f.norm(),
    })
}

/// Sweep the forward hemisphere and the oscillatory boundary for zeros of
/// the compatibility determinant and classify the front. The sweep is
/// deterministic: identical inputs produce identical verdicts.
pub fn classify_spectral(scales: &DerivedScales, grid: &GridConfig) -> Result<SpectralVerdict> {
    classify_spectral_streaming(scales, grid, &mut |_| {})
}

/// [`classify_spectral`] with every evaluated point forwarded to `sink` as
/// it is produced: grid evaluations first, then polished candidates, then
/// the certified zero when one exists. The sample order is deterministic.
pub fn classify_spectral_streaming(
    scales: &DerivedScales,
    grid: &GridConfig,
    sink: &mut dyn FnMut(SweepSample),
) -> Result<SpectralVerdict> {
    grid.validate()?;
    let sym = assemble_symbols(scales);

    let mut all_values: Vec<f64> = Vec::with_capacity(grid.n_polar * grid.n_azimuth);
    let mut interior: Vec<(f64, f64, f64)> = Vec::new();
    let mut failed = 0usize;
    for i in 0..grid.n_polar {
        let theta = (i as f64 + 0.5) / grid.n_polar as f64 * FRAC_PI_2;
        for j in 0..grid.n_azimuth {
            let phi = 2.0 * PI * (j as f64 + 0.5) / grid.n_azimuth as f64;
            let freq = interior_freq(theta, phi);
            match det_at(scales, &sym, &freq) {
                Ok(v) => {
                    all_values.push(v);
                    interior.push((v, theta, phi));
                    sink(SweepSample::at(&freq, v, 0));
                }
                Err(_) => {
                    failed += 1;
                    sink(SweepSample::at(&freq, f64::NAN, 1));
                }
            }
        }
    }
    let mut boundary: Vec<(f64, f64)> = Vec::new();
    for k in 0..grid.n_boundary {
        let psi = 2.0 * PI * (k as f64 + 0.5) / grid.n_boundary as f64;
        let freq = boundary_freq(psi);
        match det_at(scales, &sym, &freq) {
            Ok(v) => {
                all_values.push(v);
                boundary.push((v, psi));
                sink(SweepSample::at(&freq, v, 0));
            }
            Err(_) => {
                failed += 1;
                sink(SweepSample::at(&freq, f64::NAN, 1));
            }
        }
    }
    let grid_points = grid.n_polar * grid.n_azimuth + grid.n_boundary;
    if failed * 20 > grid_points || all_values.is_empty() {
        return Err(Error::Numerical(format!(
            "frequency sweep failed at {failed} of {grid_points} points"
        )));
    }
    let med = median(&mut all_values);
    if !(med.is_finite() && med > 1e-300) {
        return Err(Error::Numerical(
            "determinant scale degenerate over the sweep".into(),
        ));
    }
    let zero_tol = grid.zero_rel_tol * med;
    let clear_tol = grid.clear_rel_tol * med;
    let candidate_tol = 1e-3 * med;

    // Interior candidates: the global minimum plus every grid point well
    // below the bulk scale, capped.
    interior.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut interior_candidates: Vec<(f64, f64)> = Vec::new();
    for (rank, &(v, theta, phi)) in interior.iter().enumerate() {
        if rank == 0 || (v < candidate_tol && interior_candidates.len() < 12) {
            interior_candidates.push((theta, phi));
        }
    }

    let mut min_value = interior.first().map(|c| c.0).unwrap_or(f64::INFINITY);
    let mut min_freq = interior
        .first()
        .map(|&(_, theta, phi)| interior_freq(theta, phi));
    let mut violent_zero: Option<Polished> = None;
    let mut drifted: Vec<f64> = Vec::new();
    for &(theta, phi) in &interior_candidates {
        if let Some(p) = polish_interior(scales, &sym, theta, phi, grid.polish_iterations) {
            sink(SweepSample::at(&p.freq, p.value, 2));
            if p.value < min_value {
                min_value = p.value;
                min_freq = Some(p.freq);
            }
            if p.value < zero_tol {
                if p.freq.eta > grid.eta_floor {
                    if violent_zero
                        .as_ref()
                        .map(|b| p.value < b.value)
                        .unwrap_or(true)
                    {
                        violent_zero = Some(p);
                    }
                } else {
                    drifted.push(p.freq.omega.atan2(p.freq.xi).rem_euclid(2.0 * PI));
                }
            } else if p.freq.eta <= grid.eta_floor && p.value < candidate_tol {
                drifted.push(p.freq.omega.atan2(p.freq.xi).rem_euclid(2.0 * PI));
            }
        }
    }

    boundary.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut boundary_candidates: Vec<f64> = drifted;
    for (rank, &(v, psi)) in boundary.iter().enumerate() {
        if rank == 0 || (v < candidate_tol && boundary_candidates.len() < 16) {
            boundary_candidates.push(psi);
        }
    }
    let mut neutral_zero: Option<Polished> = None;
    for &psi in &boundary_candidates {
        if let Some(p) = polish_boundary(scales, &sym, psi, grid.polish_iterations) {
            sink(SweepSample::at(&p.freq, p.value, 2));
            if p.value < min_value {
                min_value = p.value;
                min_freq = Some(p.freq);
            }
            if p.value < zero_tol
                && neutral_zero
                    .as_ref()
                    .map(|b| p.value < b.value)
                    .unwrap_or(true)
            {
                neutral_zero = Some(p);
            }
        }
    }

    if let Some(zero) = violent_zero {
        sink(SweepSample::at(&zero.freq.canonical(), zero.value, 3));
        return Ok(SpectralVerdict {
            class: SpectralClass::Violent,
            witness: Some(zero.freq.canonical()),
            min_abs_det: Some(zero.value),
            median_abs_det: Some(med),
            branch_coincident: false,
            grid_points,
            failed_points: failed,
        });
    }
    if let Some(zero) = neutral_zero {
        sink(SweepSample::at(&zero.freq.canonical(), zero.value, 3));
        return Ok(SpectralVerdict {
            class: SpectralClass::Neutral,
            witness: Some(zero.freq.canonical()),
            min_abs_det: Some(zero.value),
            median_abs_det: Some(med),
            branch_coincident: false,
            grid_points,
            failed_points: failed,
        });
    }
    if min_value < clear_tol {
        let loc = min_freq.unwrap_or(Frequency {
            eta: 1.0,
            xi: 0.0,
            omega: 0.0,
        });
        return Err(Error::ScanInconclusive {
            min_abs_det: min_value,
            eta: loc.eta,
            xi: loc.xi,
            omega: loc.omega,
        });
    }
    Ok(SpectralVerdict {
        class: SpectralClass::Uniform,
        witness: None,
        min_abs_det: Some(min_value),
        median_abs_det: Some(med),
        branch_coincident: false,
        grid_points,
        failed_points: failed,
    })
}
