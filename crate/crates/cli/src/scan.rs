//! Grid execution for parameter-plane scans. Points are dispatched to a
//! worker pool; every worker calls only pure classification functions, and
//! results are gathered back into grid order, so output is deterministic
//! for any worker count.

use rayon::prelude::*;

use shockstab_core::{classify, ClassifyConfig, Error, ShockParameters, StabilityVerdict};

use crate::config::ScanConfig;

/// One scan row in output order.
#[derive(Debug, Clone)]
pub struct RowRecord {
    pub deformation: [[f64; 2]; 2],
    pub mach: f64,
    pub density_ratio: f64,
    pub lax_ok: bool,
    /// Stability margin, absent when the energy method did not run or the
    /// point never reached classification.
    pub energy_margin: Option<f64>,
    pub lc_pass: Option<bool>,
    /// One of uniform, neutral, violent, lax_fail, indeterminate.
    pub class: String,
    pub agree: bool,
    /// Full verdict, retained for disagreement diagnostics.
    pub verdict: Option<StabilityVerdict>,
}

enum Outcome {
    Row(Box<RowRecord>),
    /// Unrecoverable numerical failure; the scan stops at this index.
    Abort(String),
}

pub struct ScanResult {
    /// Rows up to (excluding) the first hard failure, in grid order.
    pub rows: Vec<RowRecord>,
    /// Index and message of the first hard failure, if any.
    pub abort: Option<(usize, String)>,
}

fn inadmissible_row(point: &crate::config::GridPoint) -> RowRecord {
    RowRecord {
        deformation: point.deformation,
        mach: point.mach,
        density_ratio: point.density_ratio,
        lax_ok: false,
        energy_margin: None,
        lc_pass: None,
        class: "lax_fail".into(),
        agree: true,
        verdict: None,
    }
}

fn verdict_row(point: &crate::config::GridPoint, verdict: StabilityVerdict) -> RowRecord {
    RowRecord {
        deformation: point.deformation,
        mach: point.mach,
        density_ratio: point.density_ratio,
        lax_ok: verdict.lax.admissible,
        energy_margin: verdict.energy.as_ref().map(|e| e.usc_margin),
        lc_pass: verdict.energy.as_ref().map(|e| e.lc_pass),
        class: verdict.class.as_str().to_string(),
        agree: verdict.agree,
        verdict: if verdict.agree { None } else { Some(verdict) },
    }
}

fn evaluate(config: &ScanConfig, classify_cfg: &ClassifyConfig, index: usize) -> Outcome {
    let point = config.point(index);
    let params = if config.allow_degenerate {
        ShockParameters::new_allow_degenerate(
            point.mach,
            point.density_ratio,
            point.deformation,
            None,
        )
    } else {
        ShockParameters::new(point.mach, point.density_ratio, point.deformation, None)
    };
    let params = match params {
        Ok(p) => p,
        Err(e) if e.is_invalid_input() => return Outcome::Row(Box::new(inadmissible_row(&point))),
        Err(e) => return Outcome::Abort(e.to_string()),
    };
    match classify(&params, classify_cfg) {
        Ok(v) => Outcome::Row(Box::new(verdict_row(&point, v))),
        Err(Error::ScanInconclusive { .. }) => {
            // The sweep bottomed out inside its indeterminate band. Keep
            // the point with the margins from the remaining methods and
            // mark its class unresolved.
            let mut reduced = classify_cfg.clone();
            reduced.methods.spectral = false;
            if !reduced.methods.any() {
                reduced.methods.energy = true;
                reduced.methods.polynomial = true;
            }
            match classify(&params, &reduced) {
                Ok(v) => {
                    let mut row = verdict_row(&point, v);
                    row.class = "indeterminate".into();
                    Outcome::Row(Box::new(row))
                }
                Err(e) if e.is_invalid_input() => Outcome::Row(Box::new(inadmissible_row(&point))),
                Err(e) => Outcome::Abort(e.to_string()),
            }
        }
        Err(e) if e.is_invalid_input() => Outcome::Row(Box::new(inadmissible_row(&point))),
        Err(e) => Outcome::Abort(e.to_string()),
    }
}

/// Run the whole grid with `jobs` workers (0 = rayon default) and gather
/// rows in grid order.
pub fn run_scan(config: &ScanConfig, classify_cfg: &ClassifyConfig, jobs: usize) -> ScanResult {
    let total = config.total_points();
    let body = || -> Vec<Outcome> {
        (0..total)
            .into_par_iter()
            .map(|i| evaluate(config, classify_cfg, i))
            .collect()
    };
    let outcomes = if jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("worker pool construction cannot fail for positive thread counts");
        pool.install(body)
    } else {
        body()
    };

    let mut rows = Vec::with_capacity(total);
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Row(row) => rows.push(*row),
            Outcome::Abort(message) => {
                return ScanResult {
                    rows,
                    abort: Some((index, message)),
                }
            }
        }
    }
    ScanResult { rows, abort: None }
}
