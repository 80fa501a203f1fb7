//! Report records and their JSON form.
//!
//! The JSON is the primary output; the text summary is rendered from it.

use nct::cocycle::CheckResult;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub suite: String,
    pub name: String,
    pub status: Status,
    pub checked: usize,
    pub coverage: Option<String>,
    /// Failing tuple with rendered values, or the computed value on success.
    pub detail: Option<String>,
    pub millis: Option<u128>,
}

impl Record {
    pub fn new(suite: &str, name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        Record {
            suite: suite.into(),
            name: name.into(),
            status,
            checked: 1,
            coverage: None,
            detail: (!detail.is_empty()).then_some(detail),
            millis: None,
        }
    }

    pub fn verdict(suite: &str, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Record::new(suite, name, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    pub fn skip(suite: &str, name: impl Into<String>, why: impl Into<String>) -> Self {
        let mut r = Record::new(suite, name, Status::Skip, why);
        r.checked = 0;
        r
    }

    pub fn from_check(suite: &str, name: impl Into<String>, c: &CheckResult) -> Self {
        Record {
            suite: suite.into(),
            name: name.into(),
            status: if c.passed { Status::Pass } else { Status::Fail },
            checked: c.checked,
            coverage: Some(c.coverage.clone()),
            detail: c.failure.clone(),
            millis: None,
        }
    }

    /// A check whose success means the underlying identity failed.
    pub fn expect_failure(suite: &str, name: impl Into<String>, c: &CheckResult) -> Self {
        let mut r = Record::from_check(suite, name, c);
        r.status = if c.passed { Status::Fail } else { Status::Pass };
        r.detail = Some(match &c.failure {
            Some(f) => format!("identity fails as expected: {f}"),
            None => "identity unexpectedly holds on the whole window".into(),
        });
        r
    }

    fn to_json(&self, timings: bool) -> Value {
        let mut m = Map::new();
        m.insert("suite".into(), json!(self.suite));
        m.insert("name".into(), json!(self.name));
        m.insert("status".into(), json!(self.status.as_str()));
        m.insert("checked".into(), json!(self.checked));
        if let Some(c) = &self.coverage {
            m.insert("coverage".into(), json!(c));
        }
        if let Some(d) = &self.detail {
            m.insert("detail".into(), json!(d));
        }
        if timings {
            if let Some(ms) = self.millis {
                m.insert("wall_ms".into(), json!(ms));
            }
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: String,
    pub g: usize,
    pub order: usize,
    pub window: i64,
    pub records: Vec<Record>,
}

impl Report {
    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| (&a.suite, &a.name).cmp(&(&b.suite, &b.name)));
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    /// Deterministic unless `timings` is set.
    pub fn to_json(&self, timings: bool) -> Value {
        let count = |s: Status| self.records.iter().filter(|r| r.status == s).count();
        json!({
            "config": self.config,
            "g": self.g,
            "order": self.order,
            "window": self.window,
            "records": self.records.iter().map(|r| r.to_json(timings)).collect::<Vec<_>>(),
            "summary": {"pass": count(Status::Pass), "fail": count(Status::Fail), "skip": count(Status::Skip)},
        })
    }
}

/// Plain-text summary rendered from a report's JSON.
pub fn summary(report: &Value) -> String {
    let mut out = format!(
        "{} (g = {}, N = {}, window {})\n",
        report["config"].as_str().unwrap_or("?"),
        report["g"],
        report["order"],
        report["window"]
    );
    for r in report["records"].as_array().into_iter().flatten() {
        let mut line = format!(
            "{:<4} {}/{} [{}",
            r["status"].as_str().unwrap_or("?"),
            r["suite"].as_str().unwrap_or("?"),
            r["name"].as_str().unwrap_or("?"),
            r["checked"]
        );
        if let Some(c) = r["coverage"].as_str() {
            line.push_str(&format!(", {c}"));
        }
        if let Some(ms) = r["wall_ms"].as_u64() {
            line.push_str(&format!(", {ms} ms"));
        }
        line.push(']');
        if r["status"] != "PASS" {
            if let Some(d) = r["detail"].as_str() {
                line.push_str(&format!(": {d}"));
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    let s = &report["summary"];
    out.push_str(&format!("{} passed, {} failed, {} skipped\n", s["pass"], s["fail"], s["skip"]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_sorted_and_timing_free() {
        let mut rep = Report { config: "x".into(), g: 1, order: 4, window: 1, records: Vec::new() };
        let mut a = Record::verdict("torus", "b", true, "");
        a.millis = Some(12);
        rep.records.push(a);
        rep.records.push(Record::verdict("fm", "a", false, "bad"));
        rep.sort();
        let v = rep.to_json(false);
        assert_eq!(v["records"][0]["suite"], "fm");
        assert!(v["records"][1].get("wall_ms").is_none());
        assert_eq!(rep.to_json(true)["records"][1]["wall_ms"], 12);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.find("\"config\"").unwrap() < text.find("\"records\"").unwrap());
        assert!(summary(&v).contains("FAIL fm/a [1]: bad"));
        assert!(!rep.all_passed());
    }
}
