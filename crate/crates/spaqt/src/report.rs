//! Reports, assertions and their JSON/CSV serialization.

use serde::Serialize;
use serde_json::Value;
use spaqt_core::{CMat, C64};
use thiserror::Error;

use crate::config::{ExperimentConfig, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "==")]
    Equal,
}

/// One checked claim: `measured` compared against `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub measured: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Assertion {
    fn new(name: impl Into<String>, measured: f64, comparison: Comparison, tolerance: f64) -> Self {
        // NaN compares false everywhere, so a non-finite measurement fails.
        let passed = match comparison {
            Comparison::AtMost => measured <= tolerance,
            Comparison::Below => measured < tolerance,
            Comparison::AtLeast => measured >= tolerance,
            Comparison::Equal => measured == tolerance,
        };
        Assertion { name: name.into(), measured, comparison, tolerance, passed, note: None }
    }

    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(name, measured, Comparison::AtMost, tolerance)
    }

    pub fn below(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, Comparison::Below, bound)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, Comparison::AtLeast, bound)
    }

    /// Exact comparison of counts and flags.
    pub fn equal(name: impl Into<String>, measured: impl Into<f64>, expected: impl Into<f64>) -> Self {
        Self::new(name, measured.into(), Comparison::Equal, expected.into())
    }

    pub fn flag(name: impl Into<String>, value: bool) -> Self {
        Self::equal(name, u8::from(value), 1u8)
    }

    /// A failure carrying an error message in place of a measurement.
    pub fn error(name: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(name, f64::NAN, Comparison::AtMost, 0.0).with_note(message)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A named table of numbers, exported as CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Profile {
    /// `t,gap` rows.
    pub fn gap(name: impl Into<String>, points: &[(f64, f64)]) -> Self {
        Profile {
            name: name.into(),
            columns: vec![String::from("t"), String::from("gap")],
            rows: points.iter().map(|&(t, g)| vec![t, g]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub config: ExperimentConfig,
    pub results: Value,
    pub assertions: Vec<Assertion>,
    pub profiles: Vec<Profile>,
    pub passed: bool,
    pub wall_time_s: f64,
    pub version: &'static str,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.passed)
    }
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("format {0:?} is not supported for this report: {1}")]
    UnsupportedFormat(Format, String),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

/// JSON carries the full report; CSV carries only its profiles, with a
/// leading `profile` column when there is more than one.
pub fn emit(report: &Report, format: Format) -> Result<String, EmitError> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map(|mut s| {
            s.push('\n');
            s
        }).map_err(|e| EmitError::Serialize(e.to_string())),
        Format::Csv => emit_csv(report),
    }
}

fn emit_csv(report: &Report) -> Result<String, EmitError> {
    let profiles = &report.profiles;
    let Some(first) = profiles.first() else {
        return Err(EmitError::UnsupportedFormat(Format::Csv, format!("scenario `{}` produces no tabular profile", report.scenario)));
    };
    let tagged = profiles.len() > 1;
    if profiles.iter().any(|p| p.columns != first.columns) {
        return Err(EmitError::UnsupportedFormat(Format::Csv, String::from("profiles have different columns")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| EmitError::Serialize(e.to_string());
    let mut header: Vec<&str> = Vec::new();
    if tagged {
        header.push("profile");
    }
    header.extend(first.columns.iter().map(String::as_str));
    w.write_record(&header).map_err(csv_err)?;
    for p in profiles {
        for row in &p.rows {
            let mut rec: Vec<String> = Vec::with_capacity(row.len() + 1);
            if tagged {
                rec.push(p.name.clone());
            }
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| EmitError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| EmitError::Serialize(e.to_string()))
}

/// `[re, im]`.
pub fn complex(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// Row-major nested `[re, im]` pairs.
pub fn complex_matrix(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex(m[(i, j)])).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;
    use spaqt_core::linalg::paulis;

    fn report(profiles: Vec<Profile>) -> Report {
        Report {
            scenario: String::from("elementary"),
            config: ExperimentConfig::new(Scenario::Elementary),
            results: serde_json::json!({"gate": complex_matrix(&paulis()[2])}),
            assertions: vec![Assertion::at_least("fidelity", 1.0, 0.999)],
            profiles,
            passed: true,
            wall_time_s: 0.0,
            version: VERSION,
        }
    }

    #[test]
    fn assertions_compare_and_reject_nan() {
        assert!(Assertion::at_most("a", 1e-12, 1e-10).passed);
        assert!(!Assertion::at_most("a", f64::NAN, 1e-10).passed);
        assert!(!Assertion::below("a", 2.0, 2.0).passed);
        assert!(Assertion::equal("n", 16u32, 16u32).passed);
        assert!(!Assertion::flag("f", false).passed);
        assert!(!Assertion::error("e", "boom").passed);
    }

    #[test]
    fn csv_gap_profile() {
        let r = report(vec![Profile::gap("gap", &[(0.0, 1.0), (0.5, 0.25)])]);
        assert_eq!(emit(&r, Format::Csv).unwrap(), "t,gap\n0,1\n0.5,0.25\n");
        let two = report(vec![Profile::gap("a", &[(0.0, 1.0)]), Profile::gap("b", &[(1.0, 2.0)])]);
        assert_eq!(emit(&two, Format::Csv).unwrap(), "profile,t,gap\na,0,1\nb,1,2\n");
        assert!(matches!(emit(&report(vec![]), Format::Csv), Err(EmitError::UnsupportedFormat(..))));
    }

    #[test]
    fn json_complex_pairs() {
        let s = emit(&report(vec![]), Format::Json).unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        // σʸ = [[0, −i], [i, 0]].
        assert_eq!(v["results"]["gate"][0][1], serde_json::json!([0.0, -1.0]));
        assert_eq!(v["results"]["gate"][1][0], serde_json::json!([0.0, 1.0]));
        assert_eq!(v["assertions"][0]["comparison"], ">=");
        assert_eq!(v["config"]["scenario"], "elementary");
    }
}
