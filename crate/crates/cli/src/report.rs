use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// Where a reference value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "identity")]
    Identity,
    #[serde(rename = "quadrature")]
    Quadrature,
    #[serde(rename = "MC±SE")]
    MonteCarlo,
}

/// One check: passes when `|value − reference| ≤ tolerance`.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: Provenance,
}

impl Record {
    pub fn within(name: impl Into<String>, value: f64, reference: f64, tolerance: f64, provenance: Provenance) -> Self {
        let pass = (value - reference).abs() <= tolerance;
        Record { name: name.into(), value, reference, tolerance, pass, provenance }
    }

    /// A non-negative deviation that must not exceed `tolerance`.
    pub fn deviation(name: impl Into<String>, value: f64, tolerance: f64, provenance: Provenance) -> Self {
        Record::within(name, value, 0.0, tolerance, provenance)
    }

    /// A boolean outcome, encoded as `1` for true against the reference `expected`.
    pub fn flag(name: impl Into<String>, value: bool, expected: bool, provenance: Provenance) -> Self {
        Record::within(name, value as u8 as f64, expected as u8 as f64, 0.0, provenance)
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub target: String,
    pub seed: u64,
    pub parameters: Value,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub metadata: Value,
    pub pass: bool,
    pub wall_time_s: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunReport {
    pub fn new(command: &str, target: impl Into<String>, seed: u64, parameters: Value) -> Self {
        RunReport {
            command: command.into(),
            target: target.into(),
            seed,
            parameters,
            records: Vec::new(),
            warnings: Vec::new(),
            metadata: Value::Null,
            pass: true,
            wall_time_s: 0.0,
            started: Some(Instant::now()),
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn finish(mut self) -> Self {
        self.pass = self.records.iter().all(|r| r.pass);
        if let Some(t) = self.started.take() {
            self.wall_time_s = t.elapsed().as_secs_f64();
        }
        self
    }

    pub fn failing(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Pretty JSON to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> io::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        match path {
            Some(p) => {
                let mut f = File::create(p)?;
                writeln!(f, "{text}")
            }
            None => {
                let mut out = io::stdout().lock();
                writeln!(out, "{text}")
            }
        }
    }
}

/// Writes `rows` under `header` as RFC 4180 CSV.
pub fn write_csv<R: AsRef<[String]>>(path: &Path, header: &[&str], rows: &[R]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.as_ref())?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_summary() {
        let mut r = RunReport::new("verify", "algebra", 3, Value::Null);
        r.push(Record::within("a", 1.0, 1.05, 0.1, Provenance::Identity));
        r.push(Record::deviation("b", 2e-9, 1e-10, Provenance::Quadrature));
        r.push(Record::flag("c", true, true, Provenance::MonteCarlo));
        let r = r.finish();
        assert!(!r.pass);
        assert_eq!(r.failing().map(|x| x.name.as_str()).collect::<Vec<_>>(), ["b"]);
        let v: Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["records"][2]["provenance"], "MC±SE");
        assert_eq!(v["records"][1]["provenance"], "quadrature");
        assert!(v.get("warnings").is_none() && v.get("metadata").is_none());
    }
}
