//! JSON/CSV report written by every subcommand. Field order is the struct
//! order, so identical runs produce identical bytes apart from wall times.

use std::io::Write;

use mebval::validity::Certificate;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Meta {
    pub n: Option<usize>,
    pub t: Option<usize>,
    pub d: Option<usize>,
    pub seed: Option<u64>,
    pub scenario: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleReport {
    pub rule: String,
    pub output: Vec<f64>,
    /// `|y - C*| / r*` against the labelled honest ball, or the worst case
    /// over all size-(n-t) designations.
    pub factor: Option<f64>,
    pub factor_source: Option<String>,
    pub bound: Option<f64>,
    pub certificates: Vec<Certificate>,
    pub pass: bool,
    pub wall_time_ms: f64,
}

/// One asserted property of a generated scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub achieved: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn near(name: &str, achieved: f64, expected: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            achieved,
            expected,
            tol,
            pass: (achieved - expected).abs() <= tol,
        }
    }

    pub fn above(name: &str, achieved: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            achieved,
            expected: threshold,
            tol: 0.0,
            pass: achieved > threshold,
        }
    }

    pub fn flag(name: &str, holds: bool) -> Self {
        Self {
            name: name.to_string(),
            achieved: f64::from(u8::from(holds)),
            expected: 1.0,
            tol: 0.0,
            pass: holds,
        }
    }
}

/// Per-(rule, n, t, d) summary of a bench sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub rule: String,
    pub n: usize,
    pub t: usize,
    pub d: usize,
    pub instances: usize,
    pub max_factor: f64,
    pub mean_factor: f64,
    pub bound: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub instance: Meta,
    pub rules: Vec<RuleReport>,
    pub checks: Vec<Check>,
    pub sweep: Vec<SweepRow>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, instance: Meta) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            instance,
            rules: Vec::new(),
            checks: Vec::new(),
            sweep: Vec::new(),
            pass: true,
        }
    }

    pub fn finish(mut self) -> Self {
        self.pass = self.rules.iter().all(|r| r.pass)
            && self.checks.iter().all(|c| c.pass)
            && self.sweep.iter().all(|s| s.pass);
        self
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// Flat CSV: sweep rows for bench, checks for scenarios, rule rows otherwise.
    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        if !self.sweep.is_empty() {
            w.write_record(["rule", "n", "t", "d", "instances", "max_factor", "mean_factor", "bound", "pass"])?;
            for s in &self.sweep {
                w.write_record([
                    s.rule.clone(),
                    s.n.to_string(),
                    s.t.to_string(),
                    s.d.to_string(),
                    s.instances.to_string(),
                    s.max_factor.to_string(),
                    s.mean_factor.to_string(),
                    opt(s.bound),
                    s.pass.to_string(),
                ])?;
            }
        } else if !self.checks.is_empty() {
            w.write_record(["check", "achieved", "expected", "tol", "pass"])?;
            for c in &self.checks {
                w.write_record([
                    c.name.clone(),
                    c.achieved.to_string(),
                    c.expected.to_string(),
                    c.tol.to_string(),
                    c.pass.to_string(),
                ])?;
            }
        } else {
            let dim = self.rules.first().map_or(0, |r| r.output.len());
            let mut header: Vec<String> = ["rule", "factor", "bound", "pass", "wall_time_ms"].map(String::from).into();
            header.extend((0..dim).map(|i| format!("y{i}")));
            w.write_record(&header)?;
            for r in &self.rules {
                let mut row = vec![
                    r.rule.clone(),
                    opt(r.factor),
                    opt(r.bound),
                    r.pass.to_string(),
                    r.wall_time_ms.to_string(),
                ];
                row.extend(r.output.iter().map(f64::to_string));
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
