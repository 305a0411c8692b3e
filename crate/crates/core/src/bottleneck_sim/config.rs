use serde::{Deserialize, Serialize};

/// `tau`: how likely an unlisted label may be to be valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Threshold {
    /// Keep every vertex ever seen; the tier simulator then behaves exactly
    /// like the few-tier one.
    Disabled,
    /// `2^{-n/100}`.
    Default,
    Value(f64),
}

/// Which trees the estimators average over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// Random weldings, colorings and labelings.
    Structures,
    /// The simulated tree's welding and coloring with random labels.
    LabelsOnly,
}

/// Thresholds and sampling budgets of the bottleneck simulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BottleneckConfig {
    pub tau: Threshold,
    /// `log2 rho`; `None` means `-n (g + |r|)`.
    pub rho_log2: Option<f64>,
    /// Trees drawn for the consistency ratio, and accepted trees wanted
    /// for membership estimates.
    pub samples: usize,
    /// Most trees drawn per estimate.
    pub budget: usize,
    /// Random unseen labels tested per loop iteration.
    pub fresh_candidates: usize,
    pub ensemble: Ensemble,
    /// Levels of bottleneck simulation inside the estimators' replays.
    /// At 0 the replays run the few-tier simulator on the sampled tree.
    pub nesting: usize,
    /// `samples` and `budget` used inside nested replays.
    pub nested_samples: usize,
}

impl Default for BottleneckConfig {
    fn default() -> Self {
        Self {
            tau: Threshold::Default,
            rho_log2: None,
            samples: 32,
            budget: 256,
            fresh_candidates: 8,
            ensemble: Ensemble::Structures,
            nesting: 0,
            nested_samples: 8,
        }
    }
}

impl BottleneckConfig {
    /// Defaults with `tau = 2^{-n/100}`.
    pub fn for_height(n: u32) -> Self {
        Self {
            tau: Threshold::Value(default_tau(n)),
            ..Self::default()
        }
    }

    pub fn disabled() -> Self {
        Self {
            tau: Threshold::Disabled,
            ..Self::default()
        }
    }

    /// `tau` for height `n`, filling in the default when unset.
    pub fn tau(&self, n: u32) -> Option<f64> {
        match self.tau {
            Threshold::Disabled => None,
            Threshold::Default => Some(default_tau(n)),
            Threshold::Value(t) => Some(t),
        }
    }

    pub fn rho_log2(&self, n: u32, g: usize, tape_bits: u64) -> f64 {
        self.rho_log2.unwrap_or_else(|| -(n as f64) * (g as f64 + tape_bits as f64))
    }

    pub(crate) fn nested(&self) -> Self {
        Self {
            samples: self.nested_samples,
            budget: self.nested_samples * (self.budget / self.samples.max(1)).max(1),
            nesting: self.nesting.saturating_sub(1),
            ..self.clone()
        }
    }
}

pub fn default_tau(n: u32) -> f64 {
    (-(n as f64) / 100.0).exp2()
}
