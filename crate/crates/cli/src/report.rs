//! JSON run report.
//!
//! Point indices (`point`) are 1-based, matching `x_1..x_n` in the input
//! order. Cluster indices (`labels`, the position within `memberships[j]`)
//! are 0-based and follow the order of `initial_centroids`.

use fuzzycolor::{ClusterConfig, FuzzyPartition};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub clusters: usize,
    pub init: String,
    pub fuzzifier: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl From<&ClusterConfig> for ConfigEcho {
    fn from(c: &ClusterConfig) -> Self {
        ConfigEcho {
            clusters: c.clusters,
            init: c.init.to_string(),
            fuzzifier: c.fuzzifier,
            lambda: c.lambda,
            epsilon: c.epsilon,
            max_iter: c.max_iter,
            seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialCentroid {
    pub point: usize,
    pub lab: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub points: usize,
    pub initial_centroids: Vec<InitialCentroid>,
    pub final_centroids: Vec<[f64; 3]>,
    /// `memberships[j][i]`: membership of point `j + 1` in cluster `i`.
    pub memberships: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    pub objective_trace: Vec<f64>,
}

impl RunReport {
    pub fn new(config: &ClusterConfig, partition: &FuzzyPartition) -> Self {
        RunReport {
            config: config.into(),
            points: partition.memberships.points(),
            initial_centroids: partition
                .seeds
                .iter()
                .map(|s| InitialCentroid {
                    point: s.point + 1,
                    lab: s.lab.to_array(),
                    reference: s.reference.clone(),
                })
                .collect(),
            final_centroids: partition.centroids.iter().map(|c| c.to_array()).collect(),
            memberships: partition
                .memberships
                .columns()
                .map(<[f64]>::to_vec)
                .collect(),
            labels: partition.memberships.hard_labels(),
            iterations: partition.iterations,
            converged: partition.converged,
            objective_trace: partition.objective_trace.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report values are finite");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
