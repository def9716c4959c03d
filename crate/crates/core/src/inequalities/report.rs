//! Suite reports and their JSON / CSV renderings.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), so equal
//! values always print identically and every `f64` round-trips. Non-finite
//! values are written as the strings `"inf"`, `"-inf"` and `"nan"`.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

#[derive(Clone, Debug, PartialEq)]
pub struct TrialFailure {
    pub trial: u64,
    pub margin: f64,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub suite: String,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub pass: bool,
    /// Smallest margin over the trials that produced one; `+inf` when none did.
    pub worst_margin: f64,
    pub skipped_infinite: u64,
    pub failures: Vec<TrialFailure>,
    pub runtime_ms: f64,
}

/// Text of a float in reports.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// A float as a JSON token: a 17-digit number, or a quoted string when not finite.
pub fn json_float(x: f64) -> String {
    if x.is_finite() {
        format_float(x)
    } else {
        format!("\"{}\"", format_float(x))
    }
}

struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(format_float(self.0))
                .map_err(S::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_str(&format_float(self.0))
        }
    }
}

#[derive(Serialize)]
struct FailureOut<'a> {
    trial: u64,
    margin: Num,
    digest: &'a str,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    suite: &'a str,
    trials: u64,
    seed: u64,
    tol: Num,
    pass: bool,
    worst_margin: Num,
    skipped_infinite: u64,
    failures: Vec<FailureOut<'a>>,
    runtime_ms: Num,
}

impl<'a> From<&'a CheckReport> for ReportOut<'a> {
    fn from(r: &'a CheckReport) -> Self {
        Self {
            suite: &r.suite,
            trials: r.trials,
            seed: r.seed,
            tol: Num(r.tol),
            pass: r.pass,
            worst_margin: Num(r.worst_margin),
            skipped_infinite: r.skipped_infinite,
            failures: r
                .failures
                .iter()
                .map(|f| FailureOut {
                    trial: f.trial,
                    margin: Num(f.margin),
                    digest: &f.digest,
                })
                .collect(),
            runtime_ms: Num(r.runtime_ms),
        }
    }
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ReportOut::from(self)).expect("report serializes")
    }

    /// Copy with `runtime_ms` zeroed, for byte comparisons between runs.
    pub fn without_timing(&self) -> Self {
        Self {
            runtime_ms: 0.0,
            ..self.clone()
        }
    }
}

/// JSON array of reports.
pub fn reports_to_json(reports: &[CheckReport]) -> String {
    let out: Vec<ReportOut<'_>> = reports.iter().map(ReportOut::from).collect();
    serde_json::to_string_pretty(&out).expect("reports serialize")
}

pub const CSV_HEADER: &str = "suite,trials,seed,tol,pass,worst_margin,skipped_infinite,failures,runtime_ms";

/// One row per report; `failures` is the failure count.
pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.suite,
            r.trials,
            r.seed,
            format_float(r.tol),
            r.pass,
            format_float(r.worst_margin),
            r.skipped_infinite,
            r.failures.len(),
            format_float(r.runtime_ms)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckReport {
        CheckReport {
            suite: "ssa".into(),
            trials: 3,
            seed: 7,
            tol: 1e-9,
            pass: false,
            worst_margin: -0.25,
            skipped_infinite: 1,
            failures: vec![TrialFailure {
                trial: 2,
                margin: -0.25,
                digest: "00ff".into(),
            }],
            runtime_ms: 1.5,
        }
    }

    #[test]
    fn json_schema_and_precision() {
        let text = sample().to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["suite", "trials", "seed", "tol", "pass", "worst_margin", "skipped_infinite", "failures", "runtime_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(text.contains("\"worst_margin\": -2.5000000000000000e-1"));
        assert_eq!(v["failures"][0]["digest"], "00ff");
        assert_eq!(v["tol"].as_f64(), Some(1e-9));
    }

    #[test]
    fn non_finite_values_are_strings() {
        let r = CheckReport {
            worst_margin: f64::INFINITY,
            ..sample()
        };
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["worst_margin"], "inf");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        assert_eq!(json_float(f64::INFINITY), "\"inf\"");
        assert_eq!(json_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_rows() {
        let csv = reports_to_csv(&[sample()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("ssa,3,7,1.0000000000000001e-9,false,-2.5000000000000000e-1,1,1,"));
    }
}
