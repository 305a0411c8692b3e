use serde::{Deserialize, Serialize};

use crate::circuits::HybridCircuit;
use crate::hybrid_sim::tier_seed;
use crate::rng::derive_path;

const ESTIMATOR_STREAM: u64 = 1 << 40;
const GUESS_STREAM: u64 = 2 << 40;

/// The simulator's randomness `r`, derived from one root seed.
///
/// Tier `j` (0-based) measures with `tier_seed(root, j)` and its estimators
/// draw from streams keyed by `j`, so everything up to tier `i` depends on
/// the prefix `r_{<=i}` only. `bits` is the nominal tape length
/// `n * eta * q * g` used in the ceilings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedTape {
    pub root: u64,
    pub bits: u64,
    pub tiers: usize,
}

impl SeedTape {
    pub fn new(root: u64, bits: u64, tiers: usize) -> Self {
        Self { root, bits, tiers }
    }

    /// Tape sized for `circuit`.
    pub fn for_circuit(circuit: &HybridCircuit, root: u64) -> Self {
        let q = circuit.tiers.iter().map(|t| t.depth()).max().unwrap_or(0) as u64;
        let bits = circuit.n as u64 * circuit.tiers.len() as u64 * q * circuit.width as u64;
        Self::new(root, bits, circuit.tiers.len())
    }

    /// `r_{<=i}`: the same tape restricted to the first `i` tiers.
    pub fn prefix(&self, i: usize) -> Self {
        Self {
            tiers: i.min(self.tiers),
            ..*self
        }
    }

    /// Measurement seed of tier `j`.
    pub fn measurement(&self, j: usize) -> u64 {
        debug_assert!(j < self.tiers, "tier {j} outside a {}-tier prefix", self.tiers);
        tier_seed(self.root, j)
    }

    /// Estimator seed for tier `j`, layer slot `slot`, loop iteration `k`.
    pub fn estimator(&self, j: usize, slot: usize, k: usize) -> u64 {
        derive_path(self.root, &[ESTIMATOR_STREAM, j as u64, slot as u64, k as u64])
    }

    /// Seed of the random exit guess made on ABORT in tier `j`.
    pub fn guess(&self, j: usize) -> u64 {
        derive_path(self.root, &[GUESS_STREAM, j as u64])
    }
}
