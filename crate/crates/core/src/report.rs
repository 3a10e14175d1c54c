//! Verification and scan reports, their JSON form and CSV rows.

use std::collections::BTreeMap;
use std::io::Write;

use num_traits::{Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{self, Rational};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// A residual is either an exact rational or a float with a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum Residual {
    Exact(Rational),
    Float(f64),
}

impl Residual {
    pub fn to_f64(&self) -> f64 {
        match self {
            Residual::Exact(q) => arith::to_f64(q),
            Residual::Float(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Exact(q) => q.is_zero(),
            Residual::Float(v) => *v == 0.0,
        }
    }
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Residual::Exact(q) => s.serialize_str(&arith::format_rational(q)),
            Residual::Float(v) => serialize_f64(v, s),
        }
    }
}

/// Floats in reports carry 12 significant digits.
pub fn serialize_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(arith::round12(*v))
    } else {
        s.serialize_none()
    }
}

fn serialize_pair<S: Serializer>(v: &(f64, f64), s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("range", 2)?;
    st.serialize_field("from", &json_f64(v.0))?;
    st.serialize_field("to", &json_f64(v.1))?;
    st.end()
}

/// A JSON number rounded to 12 significant digits, or null when not finite.
pub fn json_f64(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::Number::from_f64(arith::round12(v))
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    } else {
        serde_json::Value::Null
    }
}

pub fn json_rational(q: &Rational) -> serde_json::Value {
    serde_json::Value::String(arith::format_rational(q))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub points: u64,
    pub max_residual: Residual,
    #[serde(serialize_with = "serialize_f64")]
    pub worst_x: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn with_detail(mut self, key: &str, value: serde_json::Value) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn detail(&mut self, key: &str, value: serde_json::Value) {
        self.details.insert(key.to_string(), value);
    }

    /// Marks the report failed when `ok` is false, keeping the residual.
    pub fn require(&mut self, key: &str, ok: bool) {
        self.details.insert(key.to_string(), serde_json::Value::Bool(ok));
        if !ok {
            self.verdict = Verdict::Fail;
        }
    }
}

/// Running maximum of residuals over evaluation points.
///
/// Exact trackers pass only on an exactly zero maximum; float trackers pass
/// when the maximum is at most `tolerance`. Ties in the maximum keep the
/// smaller x, so merging partial trackers gives the same result in any order.
#[derive(Debug, Clone)]
pub struct ResidualTracker {
    identity: String,
    exact: bool,
    tolerance: f64,
    points: u64,
    max: Residual,
    worst_x: f64,
}

impl ResidualTracker {
    pub fn exact(identity: &str) -> Self {
        Self {
            identity: identity.to_string(),
            exact: true,
            tolerance: 0.0,
            points: 0,
            max: Residual::Exact(Rational::zero()),
            worst_x: f64::NAN,
        }
    }

    pub fn float(identity: &str, tolerance: f64) -> Self {
        Self {
            identity: identity.to_string(),
            exact: false,
            tolerance,
            points: 0,
            max: Residual::Float(0.0),
            worst_x: f64::NAN,
        }
    }

    fn take_if_worse(&mut self, x: f64, bigger: bool, equal: bool, r: Residual) {
        let first = self.worst_x.is_nan();
        if first || bigger || (equal && x < self.worst_x) {
            self.max = r;
            self.worst_x = x;
        }
    }

    pub fn observe_exact(&mut self, x: f64, residual: Rational) {
        self.points += 1;
        let r = residual.abs();
        let (bigger, equal) = match &self.max {
            Residual::Exact(m) => (&r > m, &r == m),
            Residual::Float(m) => {
                let v = arith::to_f64(&r);
                (v > *m, v == *m)
            }
        };
        self.take_if_worse(x, bigger, equal, Residual::Exact(r));
    }

    pub fn observe_float(&mut self, x: f64, residual: f64) {
        self.points += 1;
        let r = if residual.is_nan() { f64::INFINITY } else { residual.abs() };
        let m = self.max.to_f64();
        self.take_if_worse(x, r > m, r == m, Residual::Float(r));
    }

    pub fn points(&self) -> u64 {
        self.points
    }

    pub fn max_f64(&self) -> f64 {
        self.max.to_f64()
    }

    pub fn merge(mut self, other: Self) -> Self {
        let points = self.points + other.points;
        if !other.worst_x.is_nan() {
            let (bigger, equal) = match (&other.max, &self.max) {
                (Residual::Exact(a), Residual::Exact(b)) => (a > b, a == b),
                (a, b) => (a.to_f64() > b.to_f64(), a.to_f64() == b.to_f64()),
            };
            self.take_if_worse(other.worst_x, bigger, equal, other.max);
        }
        self.points = points;
        self
    }

    pub fn ok(&self) -> bool {
        if self.exact {
            self.max.is_zero()
        } else {
            self.max.to_f64() <= self.tolerance
        }
    }

    pub fn finish(self) -> VerificationReport {
        let verdict = Verdict::from_bool(self.ok());
        let mut details = BTreeMap::new();
        if !self.exact {
            details.insert("tolerance".to_string(), json_f64(self.tolerance));
        }
        VerificationReport {
            identity: self.identity,
            points: self.points,
            max_residual: self.max,
            worst_x: self.worst_x,
            verdict,
            details,
        }
    }
}

/// One evaluated point of an inequality `left <= right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub x: f64,
    pub left: f64,
    pub right: f64,
}

impl ScanRow {
    pub fn margin(&self) -> f64 {
        self.right - self.left
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(serialize_with = "serialize_pair")]
    pub x_range: (f64, f64),
    pub points: u64,
    #[serde(serialize_with = "serialize_f64")]
    pub min_margin: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub argmin_x: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    /// Builds a report from rows; rows are sorted by x and the first minimal
    /// margin wins, so the result does not depend on evaluation order.
    pub fn from_rows(identity: &str, k: Option<usize>, mut rows: Vec<ScanRow>, tolerance: f64) -> Self {
        rows.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut min_margin = f64::INFINITY;
        let mut argmin_x = f64::NAN;
        for r in &rows {
            let m = r.margin();
            let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
            if m < min_margin {
                min_margin = m;
                argmin_x = r.x;
            }
        }
        let x_range = match (rows.first(), rows.last()) {
            (Some(a), Some(b)) => (a.x, b.x),
            _ => (f64::NAN, f64::NAN),
        };
        let verdict = Verdict::from_bool(rows.is_empty() || min_margin >= -tolerance);
        Self {
            identity: identity.to_string(),
            k,
            x_range,
            points: rows.len() as u64,
            min_margin,
            argmin_x,
            tolerance,
            verdict,
            details: BTreeMap::new(),
            rows,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn detail(&mut self, key: &str, value: serde_json::Value) {
        self.details.insert(key.to_string(), value);
    }
}

/// Any report the CLI can emit.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Report {
    Verification(VerificationReport),
    Scan(ScanReport),
}

impl Report {
    pub fn passed(&self) -> bool {
        match self {
            Report::Verification(r) => r.passed(),
            Report::Scan(r) => r.passed(),
        }
    }

    pub fn identity(&self) -> &str {
        match self {
            Report::Verification(r) => &r.identity,
            Report::Scan(r) => &r.identity,
        }
    }
}

impl From<VerificationReport> for Report {
    fn from(r: VerificationReport) -> Self {
        Report::Verification(r)
    }
}

impl From<ScanReport> for Report {
    fn from(r: ScanReport) -> Self {
        Report::Scan(r)
    }
}

fn fmt_opt_k(k: Option<usize>) -> String {
    k.map(|k| k.to_string()).unwrap_or_default()
}

/// CSV with columns identity,k,x,left,right,margin, one row per scanned x.
pub fn write_scan_csv<W: Write>(reports: &[&ScanReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["identity", "k", "x", "left", "right", "margin"])?;
    for r in reports {
        for row in &r.rows {
            out.write_record([
                r.identity.clone(),
                fmt_opt_k(r.k),
                arith::format_f64(row.x),
                arith::format_f64(row.left),
                arith::format_f64(row.right),
                arith::format_f64(row.margin()),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// CSV summary of verification reports: identity,points,max_residual,worst_x,verdict.
pub fn write_verification_csv<W: Write>(reports: &[&VerificationReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["identity", "points", "max_residual", "worst_x", "verdict"])?;
    for r in reports {
        let residual = match &r.max_residual {
            Residual::Exact(q) => arith::format_rational(q),
            Residual::Float(v) => arith::format_f64(*v),
        };
        let verdict = if r.passed() { "pass" } else { "fail" };
        out.write_record([
            r.identity.clone(),
            r.points.to_string(),
            residual,
            arith::format_f64(r.worst_x),
            verdict.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// CSV summary of mixed reports: identity,k,points,statistic,value,x,verdict,
/// where the statistic is max_residual or min_margin.
pub fn write_summary_csv<W: Write>(reports: &[Report], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["identity", "k", "points", "statistic", "value", "x", "verdict"])?;
    for r in reports {
        let verdict = if r.passed() { "pass" } else { "fail" };
        let record = match r {
            Report::Verification(v) => [
                v.identity.clone(),
                String::new(),
                v.points.to_string(),
                "max_residual".to_string(),
                match &v.max_residual {
                    Residual::Exact(q) => arith::format_rational(q),
                    Residual::Float(x) => arith::format_f64(*x),
                },
                arith::format_f64(v.worst_x),
                verdict.to_string(),
            ],
            Report::Scan(s) => [
                s.identity.clone(),
                fmt_opt_k(s.k),
                s.points.to_string(),
                "min_margin".to_string(),
                arith::format_f64(s.min_margin),
                arith::format_f64(s.argmin_x),
                verdict.to_string(),
            ],
        };
        out.write_record(record)?;
    }
    out.flush()?;
    Ok(())
}
