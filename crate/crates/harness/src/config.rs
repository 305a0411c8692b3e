use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use welded_core::bottleneck_sim::BottleneckConfig;
use welded_core::circuits::random::QueryStyle;

use crate::error::HarnessError;

/// Everything a command reads. Missing fields take their defaults, unknown
/// fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    /// Report path. Not echoed into the report.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    pub walk: WalkSettings,
    pub discovery: DiscoverySettings,
    pub simulate: SimulateSettings,
    pub e2e: E2eSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: "default".into(),
            seed: 0,
            out: None,
            walk: WalkSettings::default(),
            discovery: DiscoverySettings::default(),
            simulate: SimulateSettings::default(),
            e2e: E2eSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.to_path_buf(), e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.into()));
        if self.walk.heights.iter().any(|&n| n == 0 || n > 20) {
            return bad("walk.heights must lie in 1..=20");
        }
        if self.walk.steps == 0 {
            return bad("walk.steps must be positive");
        }
        if self.walk.t_max.is_some_and(|t| !(t >= 0.0 && t.is_finite())) {
            return bad("walk.t_max must be finite and non-negative");
        }
        if self.discovery.heights.iter().any(|&n| !(2..=20).contains(&n)) {
            return bad("discovery.heights must lie in 2..=20");
        }
        let f = &self.simulate.family;
        if !(2..=4).contains(&f.n) {
            return bad("simulate.family.n must lie in 2..=4");
        }
        if f.width == 0 || f.width > 22 {
            return bad("simulate.family.width must lie in 1..=22");
        }
        if self.simulate.labelings == 0 {
            return bad("simulate.labelings must be positive");
        }
        if !(2..=20).contains(&self.e2e.walker_height) {
            return bad("e2e.walker_height must lie in 2..=20");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkSettings {
    pub heights: Vec<u32>,
    /// Sweep horizon; `None` means `4n + 8`.
    pub t_max: Option<f64>,
    pub steps: usize,
    pub walker_trials: u64,
    /// Walker queries; `None` means `ceil(best_t)`.
    pub walker_budget: Option<u64>,
    /// Required ratio of best walk probability to walker success.
    pub factor: f64,
    /// Times per height at which the full graph is cross-checked, for
    /// heights up to the full-graph cap.
    pub cross_checks: usize,
}

impl Default for WalkSettings {
    fn default() -> Self {
        Self {
            heights: vec![4],
            t_max: None,
            steps: 2000,
            walker_trials: 10_000,
            walker_budget: None,
            factor: 10.0,
            cross_checks: 5,
        }
    }
}

impl WalkSettings {
    pub fn horizon(&self, n: u32) -> f64 {
        self.t_max.unwrap_or(4.0 * n as f64 + 8.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscoverySettings {
    pub heights: Vec<u32>,
    pub queries: Vec<u32>,
    pub trials: u64,
}

impl Default for DiscoverySettings {
    fn default() -> Self {
        Self {
            heights: vec![3, 4, 5],
            queries: vec![0, 1, 4, 16],
            trials: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Hybrid,
    AllQuantum,
    Jozsa,
}

/// Random circuits to simulate when no circuit file is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircuitFamily {
    pub kind: FamilyKind,
    pub n: u32,
    pub width: usize,
    /// Tiers, or blocks for Jozsa circuits.
    pub tiers: usize,
    pub depth: usize,
    pub style: QueryStyle,
    pub count: usize,
}

impl Default for CircuitFamily {
    fn default() -> Self {
        Self {
            kind: FamilyKind::Hybrid,
            n: 2,
            width: 12,
            tiers: 3,
            depth: 3,
            style: QueryStyle::Truthful,
            count: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSettings {
    /// A circuit in the text format; replaces the random family.
    pub circuit_file: Option<PathBuf>,
    pub family: CircuitFamily,
    /// Random labelings for the reference comparison.
    pub labelings: usize,
    pub bottleneck: BottleneckConfig,
}

impl Default for SimulateSettings {
    fn default() -> Self {
        Self {
            circuit_file: None,
            family: CircuitFamily::default(),
            labelings: 50,
            bottleneck: BottleneckConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct E2eSettings {
    pub walker_height: u32,
    pub walker_trials: u64,
    /// Largest acceptable walker success rate at budget `2^{n/3}`.
    pub walker_ceiling: f64,
    pub walk_heights: Vec<u32>,
}

impl Default for E2eSettings {
    fn default() -> Self {
        Self {
            walker_height: 9,
            walker_trials: 10_000,
            walker_ceiling: 1e-3,
            walk_heights: vec![4, 9],
        }
    }
}
