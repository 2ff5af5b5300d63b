//! Cross-method invariants exercised on randomized inputs: algebraic
//! identities behind the stability margin, agreement between the coefficient
//! test, the root oracle, and the companion spectrum, root-count guarantees
//! for the dispersion factors, scale invariance of the compatibility
//! determinant, and the closed-form neutral-witness relations.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shockstab_core::lopatinski::dispersion::{dispersion_roots, lambda_plus, q1_roots, q2_roots};
use shockstab_core::lopatinski::kernel::{
    boundary_kernel, interior_kernel, pairing_value, replaced_determinant,
};
use shockstab_core::lopatinski::symbols::assemble_symbols;
use shockstab_core::symmetrizer::{
    b_matrices_factored, b_matrices_from_blocks, split_blocks, Matrix6,
};
use shockstab_core::{
    assemble_symmetrizer, classify_spectral, classify_stretching, derived_scales,
    dissipativity_probe, lienard_chipart, margin_certificate, mode_solution, quartic_root_oracle,
    sample_admissible, uniform_stability_margin, DerivedScales, Frequency, GridConfig,
    ShockParameters, SpectralClass,
};

fn admissible_params() -> impl Strategy<Value = ShockParameters> {
    (
        (-1.2f64..1.2, -1.2f64..1.2, -1.2f64..1.2, -1.2f64..1.2),
        0.03f64..0.97,
        1.05f64..6.0,
    )
        .prop_filter_map(
            "deformation too close to singular",
            |((f11, f12, f21, f22), t, density_ratio)| {
                if (f11 * f22 - f12 * f21).abs() < 0.05 {
                    return None;
                }
                let m1 = (f11 * f11 + f12 * f12).sqrt();
                let m_star = (1.0 + m1 * m1).sqrt();
                let mach = m1 + t * (m_star - m1);
                ShockParameters::new(mach, density_ratio, [[f11, f12], [f21, f22]], None).ok()
            },
        )
}

fn scales_for(params: &ShockParameters) -> DerivedScales {
    derived_scales(params).expect("admissible parameters must yield scales")
}

/// Magnitude of the individual terms entering the margin, used to turn
/// absolute residuals into relative ones.
fn margin_scale(s: &DerivedScales) -> f64 {
    (s.m_star_sq() + s.m_sq()) * s.sigma_sq()
        + (s.density_ratio() * s.m_tilde_sq() + s.m2_sq()) * s.m_star_sq() * s.m_star_sq()
        + 1.0
}

proptest! {
    /// The dual norm identity, the sum-of-squares expansion, and the
    /// factored form of the margin all agree to near machine precision on
    /// random admissible fronts.
    #[test]
    fn margin_certificate_identities(params in admissible_params()) {
        let scales = scales_for(&params);
        let cert = margin_certificate(&scales);
        prop_assert!(cert.norm_identity_residual < 1e-12,
            "norm identity residual {}", cert.norm_identity_residual);
        prop_assert!(cert.sos_residual < 1e-12,
            "sum-of-squares residual {}", cert.sos_residual);
        prop_assert!(cert.sos_value >= -1e-12 * margin_scale(&scales),
            "sum of squares went negative: {}", cert.sos_value);
        prop_assert!((cert.factors.0 * cert.factors.1 - cert.d_value).abs()
            <= 1e-12 * margin_scale(&scales));

        let margin = uniform_stability_margin(&scales);
        prop_assert!((cert.equivalent_margin - margin).abs() <= 1e-10 * margin_scale(&scales),
            "margin forms disagree: {} vs {}", cert.equivalent_margin, margin);
    }

    /// The coefficient test passes exactly when the margin is positive, and
    /// both agree with the root oracle and the companion spectrum whenever
    /// each is outside its own resolution band.
    #[test]
    fn coefficient_test_oracle_and_spectrum_agree(params in admissible_params()) {
        let scales = scales_for(&params);
        let margin = uniform_stability_margin(&scales);
        prop_assume!(margin.abs() > 1e-9 * margin_scale(&scales));

        let lc = lienard_chipart(&scales);
        prop_assert_eq!(lc.pass, margin > 0.0,
            "coefficient test {:?} vs margin {}", lc.margins, margin);

        let oracle = quartic_root_oracle(&lc.coeffs).unwrap();
        if oracle.max_real_part.abs() > 1e-7 {
            prop_assert_eq!(oracle.all_left_half_plane, margin > 0.0,
                "root oracle max Re {} vs margin {}", oracle.max_real_part, margin);
        }

        let quad = shockstab_core::symmetrizer::build_g(&scales, 2.0).unwrap();
        let g_max_re = quad
            .g_eigenvalues
            .iter()
            .fold(f64::NEG_INFINITY, |acc, z| acc.max(z.re));
        if g_max_re.abs() > 1e-7 {
            prop_assert_eq!(g_max_re < 0.0, margin > 0.0,
                "companion spectrum max Re {} vs margin {}", g_max_re, margin);
        }
    }
}

fn q1_value(s: &DerivedScales, z: Complex64, freq_s: Complex64, omega: f64) -> Complex64 {
    let i = Complex64::i();
    s.m_tilde_sq() * z * z
        + 2.0 * (s.m_sq() * freq_s - i * omega * s.ell0) * z
        + s.m_sq() * freq_s * freq_s
        + omega * omega * s.m2_sq()
}

fn q2_value(s: &DerivedScales, z: Complex64, freq_s: Complex64, omega: f64) -> Complex64 {
    let i = Complex64::i();
    -s.beta_sq() * z * z
        + 2.0 * (s.m_sq() * freq_s - i * omega * s.ell0) * z
        + s.m_sq() * freq_s * freq_s
        + omega * omega * (1.0 + s.m2_sq())
}

/// For decaying boundary data (positive real part of `s`) exactly one of
/// the seven interior roots crosses into the right half-plane, it always
/// comes from the final quadratic factor, and the middle factor never
/// contributes.
#[test]
fn exactly_one_growing_root_from_the_final_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f1e_2d3c);
    for _ in 0..500 {
        let params = sample_admissible(&mut rng);
        let scales = scales_for(&params);
        let eta = rng.gen_range(1e-3..2.0);
        let xi = rng.gen_range(-2.0..2.0);
        let omega = rng.gen_range(-2.0..2.0_f64);
        let s = Complex64::new(eta, xi);

        let roots = dispersion_roots(&scales, s, omega);
        let growing = roots.iter().filter(|z| z.re > 0.0).count();
        assert_eq!(
            growing, 1,
            "expected one growing root, found {growing} at eta={eta} xi={xi} omega={omega}"
        );

        let (m1, m2) = q1_roots(&scales, s, omega);
        for root in [m1, m2] {
            assert!(
                root.re < 1e-8 * (1.0 + root.norm()),
                "middle factor root {root} crossed the axis at eta={eta}"
            );
        }
        let (f1, f2) = q2_roots(&scales, s, omega);
        assert_eq!(
            [f1, f2].iter().filter(|z| z.re > 0.0).count(),
            1,
            "final factor must contribute the growing root"
        );

        let freq = Frequency::new(eta, xi, omega).unwrap();
        if freq.norm() > 1e-6 {
            let lam = lambda_plus(&scales, &freq).unwrap();
            assert!(lam.re > 0.0);
            let residual = q2_value(&scales, lam, s, omega).norm();
            let coeff_scale =
                scales.beta_sq() * lam.norm_sqr() + scales.m_sq() * s.norm_sqr() + omega * omega;
            assert!(
                residual <= 1e-9 * (1.0 + coeff_scale),
                "selected root fails its quadratic: residual {residual}"
            );
            assert!(
                q1_value(&scales, lam, s, omega).norm() > 1e-10 * (1.0 + coeff_scale),
                "selected root must not satisfy the middle factor"
            );
        }
    }
}

/// The compatibility value and the row-replacement determinant are exactly
/// invariant under scaling the frequency, because the boundary kernel and
/// the normalized interior rows are.
#[test]
fn pairing_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xabcd_0001);
    let mut checked = 0usize;
    while checked < 8 {
        let params = sample_admissible(&mut rng);
        let scales = scales_for(&params);
        let sym = assemble_symbols(&scales);
        let eta = rng.gen_range(0.05..1.0);
        let xi = rng.gen_range(-1.0..1.0);
        let omega = rng.gen_range(0.1..1.0_f64) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let freq = Frequency::new(eta, xi, omega).unwrap();

        let mut values = Vec::new();
        for t in [1.0, 2.5, 0.3] {
            let scaled = Frequency::new(t * eta, t * xi, t * omega).unwrap();
            let s = scaled.s();
            let lam = lambda_plus(&scales, &scaled).unwrap();
            let (u0, _) = boundary_kernel(&sym, s, scaled.omega).unwrap();
            let r = interior_kernel(&sym, s, lam, scaled.omega).unwrap();
            let pairing = pairing_value(&sym, &u0, &r);
            let det = replaced_determinant(&sym, s, lam, scaled.omega, &u0).unwrap();
            values.push((pairing, det, lam / Complex64::new(t, 0.0)));
        }
        let (base_pairing, base_det, base_lam) = values[0];
        for &(pairing, det, lam) in &values[1..] {
            assert!(
                (lam - base_lam).norm() <= 1e-8 * (1.0 + base_lam.norm()),
                "selected root is not degree-one homogeneous"
            );
            assert!(
                (pairing - base_pairing).norm() <= 1e-8 * (1.0 + base_pairing.norm()),
                "pairing changed under frequency scaling: {pairing} vs {base_pairing} at {freq:?}"
            );
            assert!(
                (det - base_det).norm() <= 1e-8 * (1.0 + base_det.norm()),
                "replacement determinant changed under scaling"
            );
        }
        checked += 1;
    }
}

/// Normalizing a frequency to the unit hemisphere is idempotent and
/// preserves the canonical representative.
#[test]
fn hemisphere_normalization_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    for _ in 0..200 {
        let freq = Frequency::new(
            rng.gen_range(0.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        )
        .unwrap();
        if freq.norm() < 1e-9 {
            continue;
        }
        let unit = freq.normalized();
        assert!((unit.norm() - 1.0).abs() < 1e-12);
        // Re-normalizing divides by a norm within one ulp of 1, so each
        // component may move by at most a couple of ulps.
        let twice = unit.normalized();
        assert!((unit.eta - twice.eta).abs() <= 4.0 * f64::EPSILON);
        assert!((unit.xi - twice.xi).abs() <= 4.0 * f64::EPSILON);
        assert!((unit.omega - twice.omega).abs() <= 4.0 * f64::EPSILON);
        let canon = unit.canonical();
        assert!(canon.omega >= 0.0);
        let canon_twice = canon.canonical();
        assert_eq!(canon.xi.to_bits(), canon_twice.xi.to_bits());
        assert_eq!(canon.omega.to_bits(), canon_twice.omega.to_bits());
    }
}

/// Both determinant constructions stay bounded away from zero on a stable
/// front and vanish together at a closed-form neutral witness.
#[test]
fn determinant_constructions_share_their_zero_set() {
    let stable = ShockParameters::new(0.9, 2.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap();
    let scales = derived_scales(&stable).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x00d5_7ab1);
    for _ in 0..30 {
        let freq = Frequency::new(
            rng.gen_range(0.01..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.05..1.0),
        )
        .unwrap()
        .normalized();
        let mode = mode_solution(&scales, &freq).unwrap();
        assert!(
            mode.det_value.norm() > 1e-8,
            "pairing nearly vanished on a stable front at {freq:?}"
        );
        assert!(
            mode.det_replaced.norm() > 1e-10,
            "replacement determinant nearly vanished on a stable front at {freq:?}"
        );
    }

    let neutral = ShockParameters::new(0.9, 4.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap();
    let nscales = derived_scales(&neutral).unwrap();
    let verdict = classify_stretching(&nscales).unwrap();
    assert_eq!(verdict.class, SpectralClass::Neutral);
    let witness = verdict.witness.expect("neutral verdict carries a witness");
    let mode = mode_solution(&nscales, &witness).unwrap();
    assert!(
        mode.det_value.norm() < 1e-6,
        "pairing should vanish at the witness, got {}",
        mode.det_value.norm()
    );
    assert!(
        mode.det_replaced.norm() < 1e-6,
        "replacement determinant should vanish at the witness, got {}",
        mode.det_replaced.norm()
    );
}

/// At a closed-form neutral witness for a stretched front the limiting
/// interior root is purely imaginary on the fast branch, and the witness
/// satisfies the frequency-ratio identity tying the tangential wavenumber
/// to the two classifier gaps.
#[test]
fn neutral_witness_satisfies_branch_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0003);
    let mut checked = 0usize;
    while checked < 3 {
        let f11 = rng.gen_range(0.1..1.0_f64);
        let f22 = rng.gen_range(0.1..1.0_f64);
        let m1 = f11;
        let m_star = (1.0 + m1 * m1).sqrt();
        let mach = rng.gen_range(0.4..0.9) * (m_star - m1) + m1;
        if mach >= 0.999 * m_star {
            continue;
        }
        let m_tilde_sq = mach * mach - m1 * m1;
        if m_tilde_sq < 1e-3 {
            continue;
        }
        // Push the density ratio far enough past the closed-form boundary
        // that the verdict is firmly neutral.
        let k2 = 1.0 + f22 * f22;
        let k1 = mach * mach * k2 / (m_star * m_star);
        let r_boundary = (k1 + k2 - f22 * f22) / m_tilde_sq;
        let density_ratio = 1.3 * r_boundary;
        let params = match ShockParameters::new(mach, density_ratio, [[f11, 0.0], [0.0, f22]], None)
        {
            Ok(p) => p,
            Err(_) => continue,
        };
        let scales = scales_for(&params);

        let verdict = classify_stretching(&scales).unwrap();
        assert_eq!(verdict.class, SpectralClass::Neutral);
        let witness = verdict.witness.unwrap();
        assert_eq!(witness.eta, 0.0);
        assert!(witness.omega > 0.0);
        let xi_ratio = witness.xi / witness.omega;

        let freq = Frequency::new(0.0, xi_ratio, 1.0).unwrap();
        let lam = lambda_plus(&scales, &freq).unwrap();
        assert!(
            lam.re.abs() < 1e-8,
            "limiting root must sit on the imaginary axis, got {lam}"
        );
        let delta = lam.im;
        assert!(delta > 0.0);

        let k = scales.k;
        let (k1, k2) = (scales.k1, scales.k2);
        let delta_closed = (k - k2).sqrt() / scales.beta;
        assert!(
            (delta - delta_closed).abs() <= 1e-8 * (1.0 + delta_closed),
            "root imaginary part {delta} disagrees with closed form {delta_closed}"
        );

        // Fast-branch side condition at the contact.
        assert!(delta / xi_ratio >= scales.m_sq() / scales.beta_sq() - 1e-9);

        let lhs = (xi_ratio / delta + 1.0).powi(2);
        let rhs = scales.m_star_sq() * (k - k1) / (scales.m_sq() * (k - k2));
        assert!(
            (lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()),
            "witness ratio identity violated: {lhs} vs {rhs}"
        );
        checked += 1;
    }
}

/// The block assembly and the factored Kronecker construction of the three
/// quadratic-form displays agree on arbitrary symmetric input.
#[test]
fn quadratic_form_displays_agree_on_random_symmetric_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb10c_0004);
    for _ in 0..50 {
        let mut h = Matrix6::zeros();
        for i in 0..6 {
            for j in 0..=i {
                let v = rng.gen_range(-2.0..2.0);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let (k, l, m, n) = split_blocks(&h).unwrap();
        let (b0, b1, b2) = b_matrices_from_blocks(&k, &l, &m, &n);
        let (f0, f1, f2) = b_matrices_factored(&h);
        let scale = h.norm().max(1.0);
        assert!((b0 - f0).norm() <= 1e-12 * scale);
        assert!((b1 - f1).norm() <= 1e-12 * scale);
        assert!((b2 - f2).norm() <= 1e-12 * scale);
    }
}

/// The sampled dissipation form matches its closed Lyapunov-side expression
/// for an arbitrary positive definite right-hand side, not just the
/// identity.
#[test]
fn probe_identity_holds_for_random_right_hand_sides() {
    let params = ShockParameters::new(0.9, 2.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap();
    let scales = derived_scales(&params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x960b_0005);
    for trial in 0..5 {
        let mut a = Matrix6::zeros();
        for i in 0..6 {
            for j in 0..6 {
                a[(i, j)] = rng.gen_range(-1.0..1.0);
            }
        }
        let g0 = a.transpose() * a + Matrix6::identity() * 0.1;
        let bundle = assemble_symmetrizer(&scales, 2.0, &g0).unwrap();
        assert!(bundle.certified(), "bundle not certified on trial {trial}");
        let report = dissipativity_probe(&bundle, 400, &mut rng);
        assert!(
            report.max_identity_error < 1e-9,
            "probe identity error {}",
            report.max_identity_error
        );
        assert!(report.min_value > 0.0);
        assert_eq!(report.samples, 400);
    }
}

/// Stretched fronts (diagonal or anti-diagonal deformations) are never
/// violently unstable: the sweep may report uniform or neutral, nothing
/// else.
#[test]
fn patterned_fronts_are_never_violent() {
    let grid = GridConfig {
        n_polar: 40,
        n_azimuth: 80,
        n_boundary: 384,
        ..GridConfig::default()
    };
    let cases = [
        (0.9, 2.0, [[0.5, 0.0], [0.0, 0.8]]),
        (0.9, 4.0, [[0.5, 0.0], [0.0, 0.8]]),
        (0.7, 3.0, [[0.3, 0.0], [0.0, 1.1]]),
        (0.9, 4.0, [[0.0, 0.5], [0.8, 0.0]]),
        (0.85, 5.0, [[0.0, 0.35], [0.9, 0.0]]),
        (0.6, 1.5, [[0.2, 0.0], [0.0, 0.4]]),
    ];
    for (mach, density_ratio, f) in cases {
        let params = ShockParameters::new(mach, density_ratio, f, None).unwrap();
        let scales = derived_scales(&params).unwrap();
        let closed = classify_stretching(&scales).unwrap();
        assert_ne!(closed.class, SpectralClass::Violent);
        match classify_spectral(&scales, &grid) {
            Ok(verdict) => {
                assert_ne!(
                    verdict.class,
                    SpectralClass::Violent,
                    "sweep reported violent instability on a stretched front M={mach} R={density_ratio}"
                );
                assert_eq!(
                    verdict.class, closed.class,
                    "sweep disagrees with closed form at M={mach} R={density_ratio}"
                );
            }
            Err(err) => panic!("sweep failed at M={mach} R={density_ratio}: {err}"),
        }
    }
}
