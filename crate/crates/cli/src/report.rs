use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: Map<String, Value>,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Check {
    pub fn new(name: &str, status: Status) -> Self {
        Self {
            name: name.to_string(),
            status,
            measured: Map::new(),
            tolerance: None,
            note: None,
            runtime_ms: None,
        }
    }

    pub fn skip(name: &str, note: &str) -> Self {
        Self::new(name, Status::Skip).note(note)
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.measured
            .insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn tol(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }

    pub fn note(mut self, n: &str) -> Self {
        self.note = Some(n.to_string());
        self
    }
}

/// Results of a check battery; `pass` is false iff some check failed.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub subject: String,
    pub n: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

/// Collects checks, timing each one when `timings` is set.
pub struct Battery {
    subject: String,
    n: usize,
    timings: bool,
    start: Instant,
    checks: Vec<Check>,
}

impl Battery {
    pub fn new(subject: &str, n: usize, timings: bool) -> Self {
        Self {
            subject: subject.to_string(),
            n,
            timings,
            start: Instant::now(),
            checks: Vec::new(),
        }
    }

    pub fn run(&mut self, f: impl FnOnce() -> Check) {
        let t = Instant::now();
        let mut c = f();
        if self.timings {
            c.runtime_ms = Some(t.elapsed().as_secs_f64() * 1e3);
        }
        self.checks.push(c);
    }

    pub fn run_many(&mut self, f: impl FnOnce() -> Vec<Check>) {
        let t = Instant::now();
        let mut cs = f();
        if self.timings {
            let ms = t.elapsed().as_secs_f64() * 1e3 / cs.len().max(1) as f64;
            for c in cs.iter_mut() {
                c.runtime_ms = Some(ms);
            }
        }
        self.checks.extend(cs);
    }

    pub fn finish(self) -> VerifyReport {
        let pass = self.checks.iter().all(|c| c.status != Status::Fail);
        VerifyReport {
            schema_version: SCHEMA_VERSION,
            subject: self.subject,
            n: self.n,
            checks: self.checks,
            pass,
            runtime_ms: self.timings.then(|| self.start.elapsed().as_secs_f64() * 1e3),
        }
    }
}

/// Turns a library error into a failed check.
pub fn errored(name: &str, e: impl std::fmt::Display) -> Check {
    Check::new(name, Status::Fail).note(&e.to_string())
}
