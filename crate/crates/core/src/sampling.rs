//! Random admissible parameter points for property tests and fuzzing.

use rand::Rng;

use crate::state::ShockParameters;

/// Draw a random parameter point satisfying the admissibility gate by
/// construction: the deformation is bounded with a determinant away from
/// zero, and the normal load sits strictly between the shear and fast
/// thresholds it induces.
pub fn sample_admissible<R: Rng + ?Sized>(rng: &mut R) -> ShockParameters {
    loop {
        let f: [[f64; 2]; 2] = [
            [rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)],
            [rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2)],
        ];
        let det = f[0][0] * f[1][1] - f[0][1] * f[1][0];
        if det.abs() < 0.05 {
            continue;
        }
        let m1 = (f[0][0] * f[0][0] + f[0][1] * f[0][1]).sqrt();
        let m_star = (1.0 + m1 * m1).sqrt();
        let t = rng.gen_range(0.03..0.97);
        let mach = m1 + t * (m_star - m1);
        let ratio = rng.gen_range(1.05..6.0);
        if let Ok(params) = ShockParameters::new(mach, ratio, f, None) {
            return params;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::check_lax;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let params = sample_admissible(&mut rng);
            let lax = check_lax(&params);
            assert!(
                lax.admissible,
                "sampled point violates the gate: {params:?}"
            );
            assert!(params.det_deformation().abs() >= 0.05);
        }
    }
}
