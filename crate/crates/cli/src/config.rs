//! Scan configuration: JSON schema, validation, and deterministic grid
//! indexing.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;
use shockstab_core::GridConfig;

/// The six front parameters a scan axis or fixed entry may name.
pub const PARAM_NAMES: [&str; 6] = ["M", "R", "F11", "F12", "F21", "F22"];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// "csv" or "json".
    #[serde(default)]
    pub format: Option<String>,
}

/// Declarative description of a parameter-plane scan. Unknown keys are
/// rejected so typos fail fast instead of silently running defaults.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Swept parameters, outermost first; row order follows axis order.
    pub axes: Vec<Axis>,
    /// Values for every parameter not on an axis.
    pub fixed: BTreeMap<String, f64>,
    /// Comma-separated method list, e.g. "energy,lc" (the default) or
    /// "all".
    #[serde(default)]
    pub methods: Option<String>,
    /// Resolution of the frequency sweep when the spectral method runs.
    #[serde(default)]
    pub grid_config: Option<GridConfig>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    /// Margin half-width treated as sign-indefinite.
    #[serde(default)]
    pub band: Option<f64>,
    /// Admit singular scaled deformations (gas-dynamics limit) instead of
    /// marking those grid points inadmissible.
    #[serde(default)]
    pub allow_degenerate: bool,
}

/// One grid point, assembled from the axes and the fixed values.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub mach: f64,
    pub density_ratio: f64,
    pub deformation: [[f64; 2]; 2],
}

impl ScanConfig {
    /// Schema checks beyond what serde enforces: nonempty axes, at least
    /// two steps per axis, finite ordered ranges, and the six parameters
    /// covered by axes and fixed values exactly once.
    pub fn validate(&self) -> Result<(), String> {
        if self.axes.is_empty() {
            return Err("scan requires at least one axis".into());
        }
        let mut seen: Vec<&str> = Vec::new();
        for axis in &self.axes {
            if !PARAM_NAMES.contains(&axis.name.as_str()) {
                return Err(format!(
                    "unknown axis parameter {:?}; expected one of {:?}",
                    axis.name, PARAM_NAMES
                ));
            }
            if axis.steps < 2 {
                return Err(format!("axis {} needs at least 2 steps", axis.name));
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.min < axis.max) {
                return Err(format!(
                    "axis {} range [{}, {}] must be finite and increasing",
                    axis.name, axis.min, axis.max
                ));
            }
            if seen.contains(&axis.name.as_str()) {
                return Err(format!("parameter {} appears on two axes", axis.name));
            }
            seen.push(&axis.name);
        }
        for (name, value) in &self.fixed {
            if !PARAM_NAMES.contains(&name.as_str()) {
                return Err(format!(
                    "unknown fixed parameter {name:?}; expected one of {PARAM_NAMES:?}"
                ));
            }
            if !value.is_finite() {
                return Err(format!("fixed parameter {name} must be finite"));
            }
            if seen.contains(&name.as_str()) {
                return Err(format!("parameter {name} is both an axis and fixed"));
            }
            seen.push(name);
        }
        for name in PARAM_NAMES {
            if !seen.contains(&name) {
                return Err(format!("parameter {name} is neither an axis nor fixed"));
            }
        }
        if let Some(spec) = &self.output {
            if let Some(fmt) = &spec.format {
                if fmt != "csv" && fmt != "json" {
                    return Err(format!("output format {fmt:?} must be \"csv\" or \"json\""));
                }
            }
        }
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    /// Decode a flat row index into parameter values; the first axis is
    /// the slowest-varying one, so rows enumerate the grid in lexicographic
    /// order of the axis indices.
    pub fn point(&self, index: usize) -> GridPoint {
        let mut values: BTreeMap<&str, f64> =
            self.fixed.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let mut rem = index;
        for axis in self.axes.iter().rev() {
            let i = rem % axis.steps;
            rem /= axis.steps;
            let v = axis.min + (axis.max - axis.min) * i as f64 / (axis.steps - 1) as f64;
            values.insert(axis.name.as_str(), v);
        }
        GridPoint {
            mach: values["M"],
            density_ratio: values["R"],
            deformation: [
                [values["F11"], values["F12"]],
                [values["F21"], values["F22"]],
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> serde_json::Value {
        serde_json::json!({
            "axes": [
                {"name": "F11", "min": 0.1, "max": 0.9, "steps": 3},
                {"name": "R", "min": 1.5, "max": 5.0, "steps": 4}
            ],
            "fixed": {"M": 0.9, "F12": 0.0, "F21": 0.0, "F22": 0.8}
        })
    }

    #[test]
    fn valid_config_round_trips() {
        let cfg: ScanConfig = serde_json::from_value(base_json()).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.total_points(), 12);
        // First axis varies slowest: the first four points share F11.
        let p0 = cfg.point(0);
        let p3 = cfg.point(3);
        let p4 = cfg.point(4);
        assert_eq!(p0.deformation[0][0], p3.deformation[0][0]);
        assert!(p4.deformation[0][0] > p0.deformation[0][0]);
        assert_eq!(p0.density_ratio, 1.5);
        assert_eq!(p3.density_ratio, 5.0);
        assert_eq!(p0.mach, 0.9);
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v = base_json();
        v["grid"] = serde_json::json!({});
        assert!(serde_json::from_value::<ScanConfig>(v).is_err());
    }

    #[test]
    fn coverage_must_be_exact() {
        let mut v = base_json();
        v["fixed"]["F22"] = serde_json::Value::Null;
        // Removing a parameter leaves it uncovered.
        v["fixed"].as_object_mut().unwrap().remove("F22");
        let cfg: ScanConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());

        let mut v = base_json();
        v["fixed"]["F11"] = serde_json::json!(0.5);
        let cfg: ScanConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn steps_and_ranges_checked() {
        let mut v = base_json();
        v["axes"][0]["steps"] = serde_json::json!(1);
        let cfg: ScanConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());

        let mut v = base_json();
        v["axes"][1]["max"] = serde_json::json!(1.0);
        let cfg: ScanConfig = serde_json::from_value(v).unwrap();
        assert!(cfg.validate().is_err());
    }
}
