use serde::{Deserialize, Serialize};

use super::oracle_sim::BranchCounts;
use crate::circuits::TierKind;
use crate::statevec::Bits;

/// What happened in one simulated layer.
///
/// Only `outlier_mass` and `fidelity` are exported; the rest is kept for
/// in-process checks.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LayerRecord {
    /// Probability weight of basis states whose simulated answers differ
    /// from the real oracle's.
    pub outlier_mass: f64,
    /// Real part of `<psi'| L^T |phi>`.
    pub fidelity: f64,
    #[serde(skip)]
    pub fidelity_im: f64,
    #[serde(skip)]
    pub tier: usize,
    #[serde(skip)]
    pub layer: usize,
    #[serde(skip)]
    pub quantum: bool,
    /// Every query's y-register held one value across the whole support.
    #[serde(skip)]
    pub clean: bool,
    #[serde(skip)]
    pub vertex_queries: u64,
    #[serde(skip)]
    pub known_before: usize,
    #[serde(skip)]
    pub known_after: usize,
    #[serde(skip)]
    pub branches: BranchCounts,
}

impl LayerRecord {
    /// `|fidelity - (1 - outlier_mass)|`, including the imaginary part.
    pub fn identity_gap(&self) -> f64 {
        (self.fidelity - (1.0 - self.outlier_mass)).hypot(self.fidelity_im)
    }
}

/// Per-tier accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierRecord {
    pub tier: usize,
    pub kind: TierKind,
    pub depth: usize,
    pub width: usize,
    pub known_before: usize,
    pub vertex_queries: u64,
}

impl TierRecord {
    /// `4^d |V|` for quantum tiers and `g d` for classical ones.
    pub fn ceiling(&self) -> u128 {
        match self.kind {
            TierKind::Quantum => 4u128.saturating_pow(self.depth as u32).saturating_mul(self.known_before as u128),
            TierKind::Classical => (self.width * self.depth) as u128,
        }
    }

    pub fn within_ceiling(&self) -> bool {
        self.vertex_queries as u128 <= self.ceiling()
    }
}

/// Record of one simulator run. `queries` counts vertex queries, each of
/// which is nine oracle calls; the entrance counts as one.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SimTranscript {
    pub queries: u64,
    pub per_layer: Vec<LayerRecord>,
    pub output: Bits,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub aborted: bool,
    #[serde(skip)]
    pub oracle_calls: u64,
    #[serde(skip)]
    pub tiers: Vec<TierRecord>,
}

impl SimTranscript {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }

    pub fn max_outlier_mass(&self) -> f64 {
        self.per_layer.iter().map(|r| r.outlier_mass).fold(0.0, f64::max)
    }

    /// Largest fidelity-identity gap over clean layers.
    pub fn max_identity_gap(&self) -> f64 {
        self.per_layer.iter().filter(|r| r.clean).map(LayerRecord::identity_gap).fold(0.0, f64::max)
    }
}
