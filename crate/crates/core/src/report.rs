//! Deterministic report serialization.
//!
//! JSON goes through `serde_json::Value`, whose object maps are sorted, so
//! key order never depends on struct layout. CSV floats are printed with
//! 17 significant digits, which round-trips f64 exactly.

use crate::error::{Error, Result};
use crate::experiments::ExperimentReport;

/// 17-significant-digit scientific form; parses back to the same bits.
pub fn float_repr(x: f64) -> String {
    format!("{x:.16e}")
}

pub const REPORT_CSV_HEADER: &str = "experiment_id,m,alpha,empirical,lower,upper,pass";

/// Flatten reports into the fixed-column CSV schema (UTF-8, LF, header
/// row): `experiment_id,m,alpha,empirical,lower,upper,pass`.
pub fn reports_to_csv(reports: &[ExperimentReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for report in reports {
        for p in &report.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                report.id,
                p.m,
                float_repr(p.alpha),
                float_repr(p.empirical),
                p.lower.map(float_repr).unwrap_or_default(),
                p.upper.map(float_repr).unwrap_or_default(),
                p.pass,
            ));
        }
    }
    out
}

/// Reports as a JSON array with sorted keys.
pub fn reports_to_json(reports: &[ExperimentReport]) -> serde_json::Value {
    serde_json::to_value(reports).expect("report serialization cannot fail")
}

/// Pretty-printed JSON text with a trailing newline.
pub fn json_to_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON formatting cannot fail");
    s.push('\n');
    s
}

/// Parse one report CSV row back into its numeric fields (used by the
/// round-trip checks; the id column is returned verbatim).
pub fn parse_csv_row(row: &str) -> Result<(String, usize, f64, f64, Option<f64>, Option<f64>, bool)> {
    let fields: Vec<&str> = row.split(',').collect();
    if fields.len() != 7 {
        return Err(Error::InvalidInput(format!(
            "expected 7 CSV columns, got {}",
            fields.len()
        )));
    }
    let parse_f = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|e| Error::InvalidInput(format!("bad float {s}: {e}")))
    };
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            parse_f(s).map(Some)
        }
    };
    Ok((
        fields[0].to_string(),
        fields[1]
            .parse()
            .map_err(|e| Error::InvalidInput(format!("bad m: {e}")))?,
        parse_f(fields[2])?,
        parse_f(fields[3])?,
        opt(fields[4])?,
        opt(fields[5])?,
        fields[6]
            .parse()
            .map_err(|e| Error::InvalidInput(format!("bad pass flag: {e}")))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::RatioPoint;

    #[test]
    fn float_repr_round_trips() {
        for x in [
            0.1,
            2f64.sqrt() / 4.0,
            1.0 / 3.0,
            6.02e23,
            -3.5449077018110318,
            f64::MIN_POSITIVE,
        ] {
            let s = float_repr(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let report = ExperimentReport {
            id: "empty".into(),
            parameters: serde_json::json!({}),
            seed: None,
            points: vec![],
            pass: true,
            runtime_secs: 0.0,
        };
        let csv = reports_to_csv(&[report]);
        assert_eq!(csv, format!("{REPORT_CSV_HEADER}\n"));
    }

    #[test]
    fn one_point_one_row() {
        let report = ExperimentReport {
            id: "x".into(),
            parameters: serde_json::json!({"b": 1.0}),
            seed: Some(1),
            points: vec![RatioPoint::new(4, 1.0, 0.25, Some(0.2), Some(0.3))],
            pass: true,
            runtime_secs: 0.0,
        };
        let csv = reports_to_csv(&[report.clone()]);
        let rows: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(rows.len(), 2);
        let (id, m, alpha, emp, lower, upper, pass) = parse_csv_row(rows[1]).unwrap();
        assert_eq!(id, "x");
        assert_eq!(m, 4);
        assert_eq!(alpha, 1.0);
        assert_eq!(emp, 0.25);
        assert_eq!(lower, Some(0.2));
        assert_eq!(upper, Some(0.3));
        assert!(pass);

        // JSON and CSV carry identical numeric values
        let json = reports_to_json(&[report]);
        let p = &json[0]["points"][0];
        assert_eq!(p["empirical"].as_f64().unwrap(), emp);
        assert_eq!(p["lower"].as_f64().unwrap(), 0.2);
    }

    #[test]
    fn json_round_trip_field_by_field() {
        let report = ExperimentReport {
            id: "rt".into(),
            parameters: serde_json::json!({"m": 3}),
            seed: Some(9),
            points: vec![RatioPoint::new(1, 0.5, 0.7071067811865476, None, Some(1.0))],
            pass: true,
            runtime_secs: 1.25,
        };
        let json = reports_to_json(&[report.clone()]);
        let back: Vec<ExperimentReport> = serde_json::from_value(json).unwrap();
        assert_eq!(back[0].id, report.id);
        assert_eq!(back[0].points, report.points);
        assert_eq!(back[0].pass, report.pass);
        // runtime is execution metadata, excluded from the serialized form
        assert_eq!(back[0].runtime_secs, 0.0);
    }
}
