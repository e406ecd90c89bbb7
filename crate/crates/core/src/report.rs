//! Experiment reports: configuration, hash, summary statistics, pass/fail
//! checks and the raw per-replicate series written as CSV sidecars.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// SHA-256 of the canonical JSON of a configuration. Object keys are
/// serialised in sorted order, so equal configs hash equally.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let v = serde_json::to_value(config).expect("configs serialise");
    let bytes = serde_json::to_vec(&v).expect("values serialise");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// `value < threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Equal-length columns sharing one row index.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Series {
    pub columns: Vec<(String, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: Value,
    pub config_hash: String,
    pub seed: u64,
    pub replicates: usize,
    pub statistics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub runtime_secs: f64,
    #[serde(skip)]
    pub series: BTreeMap<String, Series>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl ExperimentReport {
    pub fn new<T: Serialize>(experiment: &str, config: &T, seed: u64, replicates: usize) -> Self {
        Self {
            experiment: experiment.to_string(),
            config: serde_json::to_value(config).expect("configs serialise"),
            config_hash: config_hash(config),
            seed,
            replicates,
            statistics: BTreeMap::new(),
            checks: Vec::new(),
            runtime_secs: 0.0,
            series: BTreeMap::new(),
            started: Some(Instant::now()),
        }
    }

    pub fn stat(&mut self, name: &str, value: f64) {
        self.statistics.insert(name.to_string(), value);
    }

    pub fn check(&mut self, name: &str, value: f64, threshold: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value,
            threshold,
            pass: value < threshold,
        });
    }

    pub fn add_series(&mut self, group: &str, columns: Vec<(&str, Vec<f64>)>) {
        let s = self.series.entry(group.to_string()).or_default();
        s.columns.extend(columns.into_iter().map(|(n, v)| (n.to_string(), v)));
    }

    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.runtime_secs = t.elapsed().as_secs_f64();
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
