//! JSON experiment configuration.
//!
//! Configs are flat JSON objects so experiment matrices stay versionable;
//! which fields are required depends on the experiment and is validated
//! before dispatch. All randomness flows from the single `seed` field.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Reproduce,
    ProjectCompare,
    EggNorms,
    EggStabilize,
    RigidityScan,
    OracleSuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Disk,
    PuncturedDisk,
    Dxdstar,
    Hartogs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Sigma,
    Omega,
    NuTau,
}

fn default_seed() -> u64 {
    0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,

    /// Target domain for `reproduce`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainKind>,

    /// Egg exponent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    /// Hartogs exponents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Filtration level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// Pole orders for multi-puncture configurations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kvec: Option<Vec<u32>>,
    /// Measure interpolation parameter for egg experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Egg measure selector (defaults to omega).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureKind>,
    /// Single puncture position `[re, im]`; a one-element shorthand for
    /// `punctures`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<[f64; 2]>,
    /// Puncture positions, `[re, im]` pairs; `rigidity-scan` reads its scan
    /// points from here.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub punctures: Option<Vec<[f64; 2]>>,

    /// Nodes per angular circle.
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    /// Egg s-rule node count.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub grid_m: Option<usize>,

    /// Pass/fail tolerance where an experiment reports one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,

    /// Oracle-suite ranges and sample count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u32>,

    /// Band limit for random boundary data in `project-compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<u32>,
    /// Truncation points for series probes in `egg-stabilize`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncations: Option<Vec<usize>>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,

    #[serde(default = "default_seed")]
    pub seed: u64,
}
