//! Report rendering: the pinned CSV schema and the JSON shapes for
//! single-point verdicts and scan summaries.

use std::io::{self, Write};

use serde_json::{json, Value};

use shockstab_core::{StabilityVerdict, SweepSample};

use crate::scan::{RowRecord, ScanResult};

/// Fixed column schema for scan output; consumers key on this exact line.
pub const CSV_HEADER: &str =
    "F11,F12,F21,F22,M,R,lax_ok,energy_margin,lc_pass,spectral_class,agree";

/// 17 significant digits: enough to reproduce every double exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt_float(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn fmt_opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

pub fn csv_row(row: &RowRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        fmt_float(row.deformation[0][0]),
        fmt_float(row.deformation[0][1]),
        fmt_float(row.deformation[1][0]),
        fmt_float(row.deformation[1][1]),
        fmt_float(row.mach),
        fmt_float(row.density_ratio),
        row.lax_ok,
        fmt_opt_float(row.energy_margin),
        fmt_opt_bool(row.lc_pass),
        row.class,
        row.agree,
    )
}

/// Write the scan as CSV: header, rows in grid order, and a trailing error
/// record when the scan stopped early.
pub fn write_scan_csv(out: &mut dyn Write, result: &ScanResult) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in &result.rows {
        writeln!(out, "{}", csv_row(row))?;
    }
    if let Some((index, message)) = &result.abort {
        writeln!(out, "#error,point={index},{message}")?;
    }
    out.flush()
}

fn row_json(row: &RowRecord) -> Value {
    json!({
        "F11": row.deformation[0][0],
        "F12": row.deformation[0][1],
        "F21": row.deformation[1][0],
        "F22": row.deformation[1][1],
        "M": row.mach,
        "R": row.density_ratio,
        "lax_ok": row.lax_ok,
        "energy_margin": row.energy_margin,
        "lc_pass": row.lc_pass,
        "spectral_class": row.class,
        "agree": row.agree,
    })
}

/// Scan report as JSON: rows, class counts, and full diagnostics for every
/// disagreement row.
pub fn scan_report_json(result: &ScanResult) -> Value {
    let mut counts = std::collections::BTreeMap::<&str, usize>::new();
    for key in ["uniform", "neutral", "violent", "lax_fail", "indeterminate"] {
        counts.insert(key, 0);
    }
    let mut disagreements = Vec::new();
    for (index, row) in result.rows.iter().enumerate() {
        *counts.entry(row.class.as_str()).or_insert(0) += 1;
        if !row.agree {
            disagreements.push(json!({
                "index": index,
                "row": row_json(row),
                "verdict": row.verdict.as_ref().map(|v| serde_json::to_value(v).ok()),
            }));
        }
    }
    let mut report = json!({
        "rows": result.rows.iter().map(row_json).collect::<Vec<_>>(),
        "summary": {
            "total": result.rows.len(),
            "classes": counts,
            "disagreements": disagreements.len(),
        },
        "disagreements": disagreements,
    });
    if let Some((index, message)) = &result.abort {
        report["error"] = json!({"point": index, "message": message});
    }
    report
}

/// Single-point verdict JSON: the full verdict plus flattened convenience
/// keys for the margin and the coefficient test.
pub fn classify_json(verdict: &StabilityVerdict) -> Value {
    let mut value = serde_json::to_value(verdict).expect("verdict serialization cannot fail");
    if let Some(energy) = &verdict.energy {
        value["energy_margin"] = json!(energy.usc_margin);
        value["lc_pass"] = json!(energy.lc_pass);
    }
    value
}

/// A single-point verdict as one CSV row under the scan schema.
pub fn classify_csv(verdict: &StabilityVerdict) -> String {
    let row = RowRecord {
        deformation: verdict.params.deformation,
        mach: verdict.params.mach,
        density_ratio: verdict.params.density_ratio,
        lax_ok: verdict.lax.admissible,
        energy_margin: verdict.energy.as_ref().map(|e| e.usc_margin),
        lc_pass: verdict.energy.as_ref().map(|e| e.lc_pass),
        class: verdict.class.as_str().to_string(),
        agree: verdict.agree,
        verdict: None,
    };
    format!("{CSV_HEADER}\n{}\n", csv_row(&row))
}

/// Header for streamed frequency-sweep samples.
pub const SWEEP_HEADER: &str = "eta,xi,omega,abs_det,class_flag";

pub fn sweep_row(sample: &SweepSample) -> String {
    format!(
        "{},{},{},{},{}",
        fmt_float(sample.eta),
        fmt_float(sample.xi),
        fmt_float(sample.omega),
        fmt_float(sample.abs_det),
        sample.class_flag,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_17_significant_digits() {
        let s = fmt_float(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        let parsed: f64 = s.parse().unwrap();
        assert_eq!(parsed.to_bits(), std::f64::consts::PI.to_bits());
    }

    #[test]
    fn empty_fields_for_unclassified_rows() {
        let row = RowRecord {
            deformation: [[0.5, 0.0], [0.0, 0.8]],
            mach: 0.2,
            density_ratio: 2.0,
            lax_ok: false,
            energy_margin: None,
            lc_pass: None,
            class: "lax_fail".into(),
            agree: true,
            verdict: None,
        };
        let line = csv_row(&row);
        assert!(line.ends_with(",false,,,lax_fail,true"));
        assert_eq!(line.split(',').count(), CSV_HEADER.split(',').count());
    }
}
