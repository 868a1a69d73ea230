//! Serializable command reports with JSON, CSV and plain-text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::rational::Rational64;
use num::traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::spectral::{Residual, SpectralLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Stable identifier of the identity being checked.
    pub anchor: String,
    pub status: Status,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when `max_residual <= tolerance` (and is not NaN).
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        let ok = max_residual.is_finite() && max_residual <= tolerance;
        Self {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::from_bool(ok),
            max_residual,
            tolerance,
        }
    }

    pub fn exact(name: impl Into<String>, anchor: impl Into<String>, holds: bool) -> Self {
        Self::new(name, anchor, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn from_residual(r: &Residual, anchor: &str) -> Self {
        Self::new(r.name, anchor, r.value, r.tolerance)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRow {
    pub l: f64,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub grading: Option<usize>,
}

impl From<&SpectralLine> for EigenRow {
    fn from(l: &SpectralLine) -> Self {
        Self {
            l: l.l,
            eigenvalue: l.eigenvalue,
            multiplicity: l.multiplicity,
            grading: l.grading,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub eigenvalues: Vec<EigenRow>,
    pub values: BTreeMap<String, Value>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            eigenvalues: Vec::new(),
            values: BTreeMap::new(),
            status: Status::Pass,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), json!(value));
        self
    }

    pub fn value(&mut self, key: &str, value: impl Serialize) {
        self.values.insert(key.to_string(), json!(value));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Recomputes the overall status from the checks.
    pub fn finish(mut self) -> Self {
        self.status = Status::from_bool(self.checks.iter().all(Check::passed));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Eigenvalue table when present, the check table otherwise.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        if self.eigenvalues.is_empty() {
            s.push_str("name,anchor,status,max_residual,tolerance\n");
            for c in &self.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{:e},{:e}",
                    c.name,
                    c.anchor,
                    c.status.as_str(),
                    c.max_residual,
                    c.tolerance
                );
            }
        } else {
            s.push_str("l,eigenvalue,multiplicity,grading\n");
            for e in &self.eigenvalues {
                let g = e.grading.map(|g| g.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{},{},{}", e.l, e.eigenvalue, e.multiplicity, g);
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} [{}]", self.command, self.status.as_str());
        for (k, v) in &self.params {
            let _ = writeln!(s, "  {k} = {v}");
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  {:4} {:40} {:>12.3e} (tol {:.1e})  {}",
                c.status.as_str(),
                c.name,
                c.max_residual,
                c.tolerance,
                c.anchor
            );
        }
        for (k, v) in &self.values {
            let _ = writeln!(s, "  {k}: {v}");
        }
        if !self.eigenvalues.is_empty() {
            let _ = writeln!(
                s,
                "  {:>6} {:>16} {:>6} {:>3}",
                "l", "eigenvalue", "mult", "r"
            );
            for e in &self.eigenvalues {
                let g = e
                    .grading
                    .map(|g| g.to_string())
                    .unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    s,
                    "  {:>6} {:>16.10} {:>6} {:>3}",
                    e.l, e.eigenvalue, e.multiplicity, g
                );
            }
        }
        s
    }
}

/// `{"exact": "num/den", "decimal": …}`.
pub fn fraction(q: Rational64) -> Value {
    json!({
        "exact": format!("{}/{}", q.numer(), q.denom()),
        "decimal": q.to_f64().unwrap_or(f64::NAN),
    })
}
