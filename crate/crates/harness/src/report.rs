//! Inequality records and their CSV / JSON serialization.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use convexreg_core::measure::{holds_le, Estimate};
use convexreg_core::Tolerances;

use crate::error::HarnessError;

pub const COLUMNS: [&str; 14] = [
    "suite",
    "inequality_id",
    "n",
    "k",
    "body",
    "seed",
    "lhs",
    "lhs_se",
    "rhs",
    "rhs_se",
    "ratio",
    "const_calibrated",
    "status",
    "ms",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error(String),
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Status::Pass)
    }

    fn label(&self) -> String {
        match self {
            Status::Pass => "pass".into(),
            Status::Fail => "fail".into(),
            Status::Error(m) => format!("error: {m}"),
        }
    }
}

/// Which direction of `ratio = lhs / rhs` is the bad one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    /// `lhs ≤ rhs`: large ratios are bad.
    Upper,
    /// `lhs ≥ rhs`: small ratios are bad.
    Lower,
    /// `lhs = rhs`: distance from 1 is bad.
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub suite: String,
    pub inequality_id: String,
    pub n: usize,
    pub k: usize,
    pub body: String,
    pub seed: u64,
    pub lhs: f64,
    pub lhs_se: f64,
    pub rhs: f64,
    pub rhs_se: f64,
    pub ratio: f64,
    pub const_calibrated: Option<f64>,
    pub status: Status,
    pub ms: Option<u64>,
    pub sense: Sense,
}

/// Row identity shared by every record of one task.
#[derive(Debug, Clone)]
pub struct RowKey {
    pub suite: &'static str,
    pub n: usize,
    pub k: usize,
    pub body: String,
    pub seed: u64,
}

impl RowKey {
    pub fn new(suite: &'static str, n: usize, k: usize, body: impl Into<String>, seed: u64) -> Self {
        Self { suite, n, k, body: body.into(), seed }
    }

    pub fn record(&self, id: &str, lhs: &Estimate, rhs: &Estimate, sense: Sense, status: Status) -> Record {
        Record {
            suite: self.suite.to_string(),
            inequality_id: id.to_string(),
            n: self.n,
            k: self.k,
            body: self.body.clone(),
            seed: self.seed,
            lhs: lhs.value,
            lhs_se: lhs.stderr,
            rhs: rhs.value,
            rhs_se: rhs.stderr,
            ratio: lhs.value / rhs.value,
            const_calibrated: None,
            status,
            ms: None,
            sense,
        }
    }

    /// `lhs ≤ rhs` under the σ + relative-slack rule.
    pub fn le(&self, id: &str, lhs: &Estimate, rhs: &Estimate, tol: &Tolerances) -> Record {
        self.record(id, lhs, rhs, Sense::Upper, Status::from_bool(holds_le(lhs, rhs, tol).holds))
    }

    /// `lhs ≥ rhs` under the σ + relative-slack rule.
    pub fn ge(&self, id: &str, lhs: &Estimate, rhs: &Estimate, tol: &Tolerances) -> Record {
        self.record(id, lhs, rhs, Sense::Lower, Status::from_bool(holds_le(rhs, lhs, tol).holds))
    }

    /// `lhs = rhs` within the slack on both sides.
    pub fn close(&self, id: &str, lhs: &Estimate, rhs: &Estimate, tol: &Tolerances) -> Record {
        let ok = holds_le(lhs, rhs, tol).holds && holds_le(rhs, lhs, tol).holds;
        self.record(id, lhs, rhs, Sense::Equal, Status::from_bool(ok))
    }

    /// Deterministic check: `lhs` is a deviation that must not exceed `bound`.
    pub fn within(&self, id: &str, deviation: f64, bound: f64) -> Record {
        let ok = deviation.is_finite() && deviation <= bound;
        self.record(id, &Estimate::exact(deviation), &Estimate::exact(bound), Sense::Upper, Status::from_bool(ok))
    }

    pub fn error(&self, id: &str, message: impl Into<String>) -> Record {
        let nan = Estimate::exact(f64::NAN);
        self.record(id, &nan, &nan, Sense::Upper, Status::Error(message.into()))
    }
}

impl Record {
    pub fn with_constant(mut self, c: f64) -> Self {
        self.const_calibrated = Some(c);
        self
    }

    /// Badness of the ratio: larger is worse.
    fn badness(&self) -> f64 {
        let r = self.ratio;
        let b = match self.sense {
            Sense::Upper => r,
            Sense::Lower => -r,
            Sense::Equal => (r - 1.0).abs(),
        };
        if b.is_nan() {
            f64::INFINITY
        } else {
            b
        }
    }
}

fn float(x: f64) -> String {
    // Shortest round-trip representation: stable across runs and platforms.
    format!("{x:e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn csv_bytes(records: &[Record], timings: bool) -> Result<Vec<u8>, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| HarnessError::Io(e.to_string());
    w.write_record(COLUMNS).map_err(io)?;
    for r in records {
        w.write_record([
            r.suite.clone(),
            r.inequality_id.clone(),
            r.n.to_string(),
            r.k.to_string(),
            r.body.clone(),
            r.seed.to_string(),
            float(r.lhs),
            float(r.lhs_se),
            float(r.rhs),
            float(r.rhs_se),
            float(r.ratio),
            opt_float(r.const_calibrated),
            r.status.label(),
            if timings { r.ms.map(|m| m.to_string()).unwrap_or_default() } else { String::new() },
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))
}

/// Output of one suite: rows plus the constants fitted on the calibration seed.
#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub records: Vec<Record>,
    pub calibrated: BTreeMap<String, f64>,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
struct Worst {
    inequality_id: String,
    n: usize,
    k: usize,
    body: String,
    ratio: Option<f64>,
    status: String,
}

#[derive(Debug, Serialize)]
struct SuiteSummary {
    suite: String,
    rows: usize,
    pass: usize,
    fail: usize,
    error: usize,
    calibrated_constants: BTreeMap<String, f64>,
    worst_ratios: Vec<Worst>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Summary {
    seed: u64,
    calibration_seed: u64,
    all_pass: bool,
    rows: usize,
    pass: usize,
    fail: usize,
    error: usize,
    suites: Vec<SuiteSummary>,
}

fn suite_summary(s: &SuiteReport, timings: bool) -> SuiteSummary {
    let count = |f: fn(&Status) -> bool| s.records.iter().filter(|r| f(&r.status)).count();
    let mut worst: BTreeMap<&str, &Record> = BTreeMap::new();
    for r in &s.records {
        let slot = worst.entry(&r.inequality_id).or_insert(r);
        if r.badness() > slot.badness() {
            *slot = r;
        }
    }
    SuiteSummary {
        suite: s.suite.clone(),
        rows: s.records.len(),
        pass: count(|x| matches!(x, Status::Pass)),
        fail: count(|x| matches!(x, Status::Fail)),
        error: count(|x| matches!(x, Status::Error(_))),
        calibrated_constants: s.calibrated.clone(),
        worst_ratios: worst
            .values()
            .map(|r| Worst {
                inequality_id: r.inequality_id.clone(),
                n: r.n,
                k: r.k,
                body: r.body.clone(),
                ratio: r.ratio.is_finite().then_some(r.ratio),
                status: r.status.label(),
            })
            .collect(),
        seconds: timings.then_some(s.seconds),
    }
}

pub fn summary_json(reports: &[SuiteReport], seed: u64, calibration_seed: u64, timings: bool) -> String {
    let suites: Vec<SuiteSummary> = reports.iter().map(|s| suite_summary(s, timings)).collect();
    let sum = |f: fn(&SuiteSummary) -> usize| suites.iter().map(f).sum::<usize>();
    let summary = Summary {
        seed,
        calibration_seed,
        all_pass: all_pass(reports),
        rows: sum(|s| s.rows),
        pass: sum(|s| s.pass),
        fail: sum(|s| s.fail),
        error: sum(|s| s.error),
        suites,
    };
    serde_json::to_string_pretty(&summary).expect("summary is serializable")
}

pub fn all_pass(reports: &[SuiteReport]) -> bool {
    reports.iter().all(|s| s.records.iter().all(|r| r.status.is_pass()))
}

/// Writes `<suite>.csv` per suite and `summary.json` into `dir`.
pub fn write_reports(
    dir: &Path,
    reports: &[SuiteReport],
    seed: u64,
    calibration_seed: u64,
    timings: bool,
) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for s in reports {
        let path = dir.join(format!("{}.csv", s.suite));
        let mut f = std::fs::File::create(&path).map_err(io)?;
        f.write_all(&csv_bytes(&s.records, timings)?).map_err(io)?;
    }
    let path = dir.join("summary.json");
    std::fs::write(path, summary_json(reports, seed, calibration_seed, timings) + "\n").map_err(io)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn est(v: f64, se: f64) -> Estimate {
        Estimate { stderr: se, ..Estimate::exact(v) }
    }

    #[test]
    fn csv_has_fixed_columns_and_blank_timings() {
        let key = RowKey::new("classics", 3, 1, "cube", 7);
        let tol = Tolerances::default();
        let mut r = key.le("x", &est(1.0, 0.1), &est(2.0, 0.0), &tol);
        r.ms = Some(12);
        let text = String::from_utf8(csv_bytes(&[r.clone()], false).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        let row = lines.next().unwrap();
        assert!(row.starts_with("classics,x,3,1,cube,7,1e0,1e-1,2e0,0e0,5e-1,,pass,"));
        assert!(row.ends_with(",pass,"));
        let text = String::from_utf8(csv_bytes(&[r], true).unwrap()).unwrap();
        assert!(text.trim_end().ends_with(",pass,12"));
    }

    #[test]
    fn comparison_helpers() {
        let key = RowKey::new("s", 2, 1, "b", 0);
        let tol = Tolerances::default();
        assert!(key.ge("g", &est(1.0, 0.0), &est(1.2, 0.1), &tol).status.is_pass());
        assert!(!key.ge("g", &est(1.0, 0.0), &est(2.0, 0.1), &tol).status.is_pass());
        assert!(key.close("c", &est(1.0, 0.01), &est(1.02, 0.0), &tol).status.is_pass());
        assert!(!key.close("c", &est(1.0, 0.001), &est(1.1, 0.0), &tol).status.is_pass());
        assert!(key.within("w", 1e-12, 1e-9).status.is_pass());
        assert!(!key.within("w", f64::NAN, 1e-9).status.is_pass());
    }

    #[test]
    fn summary_counts_and_worst_rows() {
        let key = RowKey::new("s", 2, 1, "b", 0);
        let tol = Tolerances::default();
        let rows = vec![
            key.le("a", &est(1.0, 0.0), &est(2.0, 0.0), &tol),
            key.le("a", &est(3.0, 0.0), &est(2.0, 0.0), &tol),
            key.error("b", "boom"),
        ];
        let rep = SuiteReport { suite: "s".into(), records: rows, ..Default::default() };
        let v: serde_json::Value = serde_json::from_str(&summary_json(&[rep], 1, 2, false)).unwrap();
        assert_eq!(v["pass"], 1);
        assert_eq!(v["fail"], 1);
        assert_eq!(v["error"], 1);
        assert_eq!(v["all_pass"], false);
        assert_eq!(v["suites"][0]["worst_ratios"][0]["ratio"], 1.5);
        assert!(v["suites"][0].get("seconds").is_none());
    }
}
