//! Cross-validated classification pipeline: admissibility gate, algebraic
//! stability margin, polynomial criterion with a root oracle, symmetrizer
//! certificate, and the frequency-domain sweep, merged into one verdict
//! with an agreement flag across every method that ran.

use nalgebra::SMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{detect_pattern, energy_verdict, EnergyVerdict, MARGIN_BAND};
use crate::error::{Error, Result};
use crate::lopatinski::{
    classify_spectral_streaming, classify_stretching, GridConfig, SpectralClass, SpectralVerdict,
    SweepSample,
};
use crate::scales::derived_scales;
use crate::state::{check_lax, LaxReport, ShockParameters};
use crate::symmetrizer::{assemble_symmetrizer, dissipativity_probe, ProbeReport};

/// Final stability classes reported by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    Uniform,
    Neutral,
    Violent,
    LaxFail,
    Indeterminate,
}

impl StabilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityClass::Uniform => "uniform",
            StabilityClass::Neutral => "neutral",
            StabilityClass::Violent => "violent",
            StabilityClass::LaxFail => "lax_fail",
            StabilityClass::Indeterminate => "indeterminate",
        }
    }
}

impl From<SpectralClass> for StabilityClass {
    fn from(c: SpectralClass) -> Self {
        match c {
            SpectralClass::Uniform => StabilityClass::Uniform,
            SpectralClass::Neutral => StabilityClass::Neutral,
            SpectralClass::Violent => StabilityClass::Violent,
        }
    }
}

/// Which methods to run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MethodSelection {
    /// Algebraic stability margin.
    pub energy: bool,
    /// Polynomial criterion plus companion-matrix root oracle.
    pub polynomial: bool,
    /// Symmetrizer certificate through the Lyapunov solve.
    pub symmetrizer: bool,
    /// Frequency-domain sweep; off by default because it dominates cost.
    pub spectral: bool,
}

impl Default for MethodSelection {
    fn default() -> Self {
        MethodSelection {
            energy: true,
            polynomial: true,
            symmetrizer: true,
            spectral: false,
        }
    }
}

impl MethodSelection {
    /// Parse a comma-separated list such as `energy,lc` or `all`.
    pub fn parse(list: &str) -> Result<Self> {
        let mut sel = MethodSelection {
            energy: false,
            polynomial: false,
            symmetrizer: false,
            spectral: false,
        };
        for raw in list.split(',') {
            match raw.trim().to_ascii_lowercase().as_str() {
                "" => {}
                "all" => {
                    sel.energy = true;
                    sel.polynomial = true;
                    sel.symmetrizer = true;
                    sel.spectral = true;
                }
                "energy" => sel.energy = true,
                "lc" | "polynomial" => sel.polynomial = true,
                "symmetrizer" | "lyapunov" => sel.symmetrizer = true,
                "spectral" | "sweep" => sel.spectral = true,
                other => return Err(Error::InvalidParameter(format!(
                    "unknown method '{other}'; expected energy, lc, symmetrizer, spectral, or all"
                ))),
            }
        }
        if !(sel.energy || sel.polynomial || sel.symmetrizer || sel.spectral) {
            return Err(Error::InvalidParameter("method selection is empty".into()));
        }
        Ok(sel)
    }

    pub fn any(&self) -> bool {
        self.energy || self.polynomial || self.symmetrizer || self.spectral
    }
}

/// Tunable knobs for [`classify`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifyConfig {
    pub methods: MethodSelection,
    /// Margins inside `[-band, band]` are treated as sign-indefinite.
    pub band: f64,
    pub grid: GridConfig,
    /// Free parameter of the symmetrizer construction; any value above 1
    /// works and the certificate does not depend on the choice.
    pub alpha: f64,
    /// Random directions for the dissipativity probe; 0 skips it.
    pub probe_samples: usize,
    pub probe_seed: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            methods: MethodSelection::default(),
            band: MARGIN_BAND,
            grid: GridConfig::default(),
            alpha: 2.0,
            probe_samples: 64,
            probe_seed: 0x5eed,
        }
    }
}

/// Serializable summary of the symmetrizer certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetrizerSummary {
    /// True when the spectrum is stable, the certificate matrix and the
    /// weighted block are positive definite, and the probe (if run) stayed
    /// positive.
    pub certified: bool,
    pub h_min_eigenvalue: Option<f64>,
    pub b0_tilde_min_eigenvalue: Option<f64>,
    pub lyapunov_residual: Option<f64>,
    pub g_max_real_part: Option<f64>,
    pub probe: Option<ProbeReport>,
    /// Failure description when the construction could not be completed.
    pub error: Option<String>,
}

/// Merged verdict of every method that ran.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityVerdict {
    pub params: ShockParameters,
    pub lax: LaxReport,
    pub class: StabilityClass,
    pub energy: Option<EnergyVerdict>,
    pub symmetrizer: Option<SymmetrizerSummary>,
    pub spectral: Option<SpectralVerdict>,
    /// `"sweep"` or `"closed_form"` when the spectral verdict is present.
    pub spectral_source: Option<String>,
    pub methods_run: Vec<String>,
    /// True when every method that reached a confident verdict lands on
    /// the same side of uniform stability.
    pub agree: bool,
}

fn run_symmetrizer(
    scales: &crate::scales::DerivedScales,
    config: &ClassifyConfig,
) -> Result<SymmetrizerSummary> {
    match assemble_symmetrizer(scales, config.alpha, &SMatrix::<f64, 6, 6>::identity()) {
        Ok(bundle) => {
            let probe = if config.probe_samples > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(config.probe_seed);
                Some(dissipativity_probe(&bundle, config.probe_samples, &mut rng))
            } else {
                None
            };
            let probe_ok = probe.map(|p| p.min_value > 0.0).unwrap_or(true);
            Ok(SymmetrizerSummary {
                certified: bundle.certified() && probe_ok,
                h_min_eigenvalue: Some(bundle.h_min_eigenvalue),
                b0_tilde_min_eigenvalue: Some(bundle.b0_tilde_min_eigenvalue),
                lyapunov_residual: Some(bundle.lyapunov_residual),
                g_max_real_part: Some(bundle.g_max_real_part),
                probe,
                error: None,
            })
        }
        Err(Error::SpectrumNotStable { max_re }) => Ok(SymmetrizerSummary {
            certified: false,
            h_min_eigenvalue: None,
            b0_tilde_min_eigenvalue: None,
            lyapunov_residual: None,
            g_max_real_part: Some(max_re),
            probe: None,
            error: Some(format!(
                "companion spectrum reaches the closed right half-plane (max Re {max_re:.3e})"
            )),
        }),
        Err(e @ (Error::IllConditioned(_) | Error::SingularBlock { .. } | Error::Numerical(_))) => {
            Ok(SymmetrizerSummary {
                certified: false,
                h_min_eigenvalue: None,
                b0_tilde_min_eigenvalue: None,
                lyapunov_residual: None,
                g_max_real_part: None,
                probe: None,
                error: Some(e.to_string()),
            })
        }
        Err(e) => Err(e),
    }
}

/// Run the selected methods on one parameter point and merge the verdicts.
///
/// Inadmissible fronts short-circuit to [`StabilityClass::LaxFail`]. A
/// frequency sweep that bottoms out between its zero and clear tolerances
/// propagates [`Error::ScanInconclusive`].
pub fn classify(params: &ShockParameters, config: &ClassifyConfig) -> Result<StabilityVerdict> {
    classify_with_sweep_sink(params, config, &mut |_| {})
}

/// [`classify`] with frequency-sweep samples forwarded to `sink` while the
/// spectral method runs. Points arrive in the deterministic sweep order;
/// the sink sees nothing when the spectral method is not selected.
pub fn classify_with_sweep_sink(
    params: &ShockParameters,
    config: &ClassifyConfig,
    sink: &mut dyn FnMut(SweepSample),
) -> Result<StabilityVerdict> {
    if !config.methods.any() {
        return Err(Error::InvalidParameter("no methods selected".into()));
    }
    let lax = check_lax(params);
    if !lax.admissible {
        return Ok(StabilityVerdict {
            params: params.clone(),
            lax,
            class: StabilityClass::LaxFail,
            energy: None,
            symmetrizer: None,
            spectral: None,
            spectral_source: None,
            methods_run: vec!["lax".into()],
            agree: true,
        });
    }
    let scales = derived_scales(params)?;
    let mut methods_run = vec!["lax".to_string()];

    let energy = if config.methods.energy || config.methods.polynomial {
        if config.methods.energy {
            methods_run.push("energy".into());
        }
        if config.methods.polynomial {
            methods_run.push("lc".into());
        }
        Some(energy_verdict(&scales, config.band)?)
    } else {
        None
    };

    let symmetrizer = if config.methods.symmetrizer {
        methods_run.push("symmetrizer".into());
        Some(run_symmetrizer(&scales, config)?)
    } else {
        None
    };

    let pattern = detect_pattern(&scales);
    let (spectral, spectral_source) = if config.methods.spectral {
        methods_run.push("spectral".into());
        let verdict = classify_spectral_streaming(&scales, &config.grid, sink)?;
        (Some(verdict), Some("sweep".to_string()))
    } else if pattern.is_some() {
        let verdict = classify_stretching(&scales)?;
        (Some(verdict), Some("closed_form".to_string()))
    } else {
        (None, None)
    };

    // Class: frequency-domain verdicts dominate; otherwise the sign of the
    // stability margin decides, and a strictly negative margin without
    // frequency information cannot separate neutral from violent.
    let class = if let Some(sv) = &spectral {
        StabilityClass::from(sv.class)
    } else if let Some(ev) = &energy {
        if ev.usc_margin > config.band {
            StabilityClass::Uniform
        } else {
            StabilityClass::Indeterminate
        }
    } else {
        StabilityClass::Indeterminate
    };

    // Agreement: every confident method must land on the same side of
    // uniform stability. Margin-band and near-axis cases abstain.
    let mut votes: Vec<bool> = Vec::new();
    if let Some(ev) = &energy {
        if ev.usc_margin.abs() > config.band {
            let stable = ev.usc_margin > 0.0;
            if config.methods.energy {
                votes.push(stable);
            }
            if config.methods.polynomial {
                votes.push(ev.lc_pass);
                let max_re = ev
                    .quartic_roots
                    .iter()
                    .map(|z| z.re)
                    .fold(f64::NEG_INFINITY, f64::max);
                if max_re.abs() > 1e-7 {
                    votes.push(max_re < 0.0);
                }
            }
        }
    }
    if let Some(sm) = &symmetrizer {
        // The certificate abstains when it failed for numerical reasons
        // rather than a verdict.
        let confident = sm.error.is_none() || sm.g_max_real_part.is_some();
        if confident {
            votes.push(sm.certified);
        }
    }
    if let Some(sv) = &spectral {
        votes.push(sv.class == SpectralClass::Uniform);
    }
    let agree = votes.windows(2).all(|w| w[0] == w[1]);

    Ok(StabilityVerdict {
        params: params.clone(),
        lax,
        class,
        energy,
        symmetrizer,
        spectral,
        spectral_source,
        methods_run,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mach: f64, ratio: f64, f: [[f64; 2]; 2]) -> ShockParameters {
        ShockParameters::new(mach, ratio, f, None).unwrap()
    }

    #[test]
    fn uniform_point_all_methods_agree() {
        let verdict = classify(
            &params(0.9, 2.0, [[0.5, 0.0], [0.0, 0.8]]),
            &ClassifyConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.class, StabilityClass::Uniform);
        assert!(verdict.agree);
        assert!(verdict.energy.as_ref().unwrap().usc_margin > 0.0);
        assert!(verdict.symmetrizer.as_ref().unwrap().certified);
        assert_eq!(verdict.spectral_source.as_deref(), Some("closed_form"));
    }

    #[test]
    fn neutral_stretching_classified_without_sweep() {
        let verdict = classify(
            &params(0.9, 4.0, [[0.5, 0.0], [0.0, 0.8]]),
            &ClassifyConfig::default(),
        )
        .unwrap();
        assert_eq!(verdict.class, StabilityClass::Neutral);
        assert!(verdict.agree, "all methods should sit on the unstable side");
        assert!(!verdict.symmetrizer.as_ref().unwrap().certified);
        assert!(verdict.spectral.as_ref().unwrap().witness.is_some());
    }

    #[test]
    fn lax_violation_short_circuits() {
        // Normal load below the shear wave speed: inadmissible.
        let p = ShockParameters::new(0.4, 2.0, [[0.5, 0.0], [0.0, 0.8]], None).unwrap();
        let verdict = classify(&p, &ClassifyConfig::default()).unwrap();
        assert_eq!(verdict.class, StabilityClass::LaxFail);
        assert!(verdict.energy.is_none());
    }

    #[test]
    fn mixed_deformation_without_sweep_is_indeterminate_when_unstable() {
        // A deformation with every entry loaded has no closed form; with
        // the sweep off and a negative margin the class stays open.
        let p = params(0.95, 5.5, [[0.55, 0.3], [-0.25, 0.8]]);
        let scales = derived_scales(&p).unwrap();
        let margin = crate::energy::uniform_stability_margin(&scales);
        assert!(margin < 0.0, "test point must be on the unstable side");
        let verdict = classify(&p, &ClassifyConfig::default()).unwrap();
        assert_eq!(verdict.class, StabilityClass::Indeterminate);
    }

    #[test]
    fn method_parsing() {
        let all = MethodSelection::parse("all").unwrap();
        assert!(all.energy && all.polynomial && all.symmetrizer && all.spectral);
        let two = MethodSelection::parse("energy,lc").unwrap();
        assert!(two.energy && two.polynomial);
        assert!(!two.symmetrizer && !two.spectral);
        assert!(MethodSelection::parse("energy,bogus").is_err());
        assert!(MethodSelection::parse("").is_err());
    }

    #[test]
    fn class_strings_are_stable() {
        assert_eq!(StabilityClass::Uniform.as_str(), "uniform");
        assert_eq!(StabilityClass::LaxFail.as_str(), "lax_fail");
        assert_eq!(
            serde_json::to_string(&StabilityClass::Neutral).unwrap(),
            "\"neutral\""
        );
    }
}
