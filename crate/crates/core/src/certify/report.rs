use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::func_core::Tolerances;

/// A sampled point where a check attained its extreme or failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: f64,
    pub y: Option<f64>,
    pub value: f64,
}

/// Sampling parameters a report was produced with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    pub norm_samples: usize,
    pub norm_convention: String,
    pub tolerances: Tolerances,
}

pub const NORM_CONVENTION: &str = "max_{j<=k} sup|f^(j)| on a uniform grid";

impl GridParams {
    pub fn line(n: usize, norm_samples: usize, tolerances: Tolerances) -> Self {
        GridParams {
            n: Some(n),
            nx: None,
            ny: None,
            norm_samples,
            norm_convention: NORM_CONVENTION.to_string(),
            tolerances,
        }
    }

    pub fn plane(nx: usize, ny: usize, tolerances: Tolerances) -> Self {
        GridParams {
            n: None,
            nx: Some(nx),
            ny: Some(ny),
            norm_samples: nx.max(ny),
            norm_convention: NORM_CONVENTION.to_string(),
            tolerances,
        }
    }
}

/// Outcome of one verification check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertReport {
    pub name: String,
    pub passed: bool,
    pub empirical_constant: f64,
    pub witnesses: Vec<Witness>,
    pub grid_params: GridParams,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

impl CertReport {
    pub fn new(name: impl Into<String>, grid_params: GridParams) -> Self {
        CertReport {
            name: name.into(),
            passed: true,
            empirical_constant: 0.0,
            witnesses: Vec::new(),
            grid_params,
            notes: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn witness(&mut self, x: f64, y: Option<f64>, value: f64) {
        self.witnesses.push(Witness { x, y, value: finite_or_max(value) });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), finite_or_max(value));
    }

    pub fn constant(&mut self, value: f64) {
        self.empirical_constant = finite_or_max(value);
    }

    /// Marks the report failed and records why.
    pub fn fail(&mut self, x: f64, y: Option<f64>, value: f64, reason: impl Into<String>) {
        self.passed = false;
        self.witness(x, y, value);
        self.note(reason);
    }

    /// Folds a sub-report into this one, prefixing its notes and metrics.
    pub fn absorb(&mut self, other: &CertReport) {
        if !other.passed {
            self.passed = false;
            self.witnesses.extend(other.witnesses.iter().cloned());
        }
        for n in &other.notes {
            self.notes.push(format!("{}: {n}", other.name));
        }
        for (k, v) in &other.metrics {
            self.metrics.insert(format!("{}.{k}", other.name), *v);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::Malformed(e.to_string()))
    }
}

/// JSON has no infinities; divergent quantities are reported as `f64::MAX`.
fn finite_or_max(v: f64) -> f64 {
    if v.is_nan() {
        f64::MAX
    } else {
        v.clamp(-f64::MAX, f64::MAX)
    }
}
