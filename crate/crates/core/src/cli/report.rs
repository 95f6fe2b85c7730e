//! Verification reports: JSON document plus CSV tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::Suite;
use crate::error::{Error, Result};

/// Non-finite floats as the strings "inf", "-inf", "nan".
mod float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub suite: Suite,
    pub name: String,
    #[serde(with = "float")]
    pub value: f64,
    #[serde(with = "float")]
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeshMeta {
    pub source: String,
    pub heisenberg: bool,
    pub nodes: usize,
    pub triangles: usize,
    /// Largest parameter edge.
    pub h: f64,
    #[serde(with = "float")]
    pub gauge_support: f64,
    pub origin_preimages: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub r: f64,
    pub density: f64,
    pub area: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mesh: MeshMeta,
    pub suites: Vec<Suite>,
    pub entries: Vec<Entry>,
    pub density: Vec<DensityRow>,
    /// Origin weight per origin preimage node.
    pub theta0: BTreeMap<usize, f64>,
    /// Measured constants and diagnostics without a pass/fail verdict.
    pub constants: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    /// Checks left out because their preconditions do not hold on this mesh.
    pub skipped: Vec<String>,
    pub pass: bool,
}

/// Wall-clock seconds per suite, kept apart from the report so reports stay
/// reproducible.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub mesh: f64,
    pub suites: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn push(&mut self, suite: Suite, name: impl Into<String>, value: f64, tolerance: f64) {
        let pass = value <= tolerance;
        self.entries.push(Entry {
            suite,
            name: name.into(),
            value,
            tolerance,
            pass,
        });
    }

    pub fn finish(&mut self) {
        self.pass = self.entries.iter().all(|e| e.pass);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad report: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn identities_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "value", "tolerance", "pass"]).ok();
        for e in &self.entries {
            let name = format!("{}.{}", e.suite.name(), e.name);
            w.write_record([
                name,
                fmt_float(e.value),
                fmt_float(e.tolerance),
                e.pass.to_string(),
            ])
            .ok();
        }
        String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
    }

    pub fn density_csv(&self) -> String {
        density_csv(&self.density)
    }

    /// Human-readable summary.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let m = &self.mesh;
        let _ = writeln!(
            s,
            "mesh: {} ({} nodes, {} triangles, h = {:.4})",
            m.source, m.nodes, m.triangles, m.h
        );
        let width = self
            .entries
            .iter()
            .map(|e| e.suite.name().len() + e.name.len() + 1)
            .max()
            .unwrap_or(0);
        for e in &self.entries {
            let name = format!("{}.{}", e.suite.name(), e.name);
            let verdict = if e.pass { "pass" } else { "FAIL" };
            let _ = writeln!(
                s,
                "  {name:<width$}  {:>10}  <= {:>10}  {verdict}",
                short(e.value),
                short(e.tolerance)
            );
        }
        for (p, t) in &self.theta0 {
            let _ = writeln!(s, "  theta0[{p}] = {:.6}", t);
        }
        for (k, v) in &self.verdicts {
            let _ = writeln!(s, "  {k}: {v}");
        }
        for k in &self.skipped {
            let _ = writeln!(s, "  skipped: {k}");
        }
        let _ = writeln!(s, "overall: {}", if self.pass { "pass" } else { "FAIL" });
        s
    }
}

pub fn density_csv(rows: &[DensityRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "density", "area"]).ok();
    for r in rows {
        w.write_record([fmt_float(r.r), fmt_float(r.density), fmt_float(r.area)])
            .ok();
    }
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

/// Shortest round-trip representation.
fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn short(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3e}")
    } else {
        format!("{v}")
    }
}
