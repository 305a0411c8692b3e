use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, HybridCircuit, JozsaCircuit};
use super::gate::GateKind;
use super::tier::{Tier, TierKind};
use super::validate::{ensure_valid, validate};
use crate::error::Result;

/// Size parameters and gate counts of a valid circuit.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Accounting {
    /// Number of tiers; for a Jozsa circuit, the number of blocks.
    pub eta: usize,
    /// Width `g`.
    pub g: usize,
    /// Deepest classical tier.
    pub c: usize,
    /// Deepest quantum tier.
    pub q: usize,
    pub gate_counts: BTreeMap<String, usize>,
    pub query_gates: usize,
    pub classical_query_gates: usize,
    pub quantum_query_gates: usize,
}

impl Accounting {
    fn add_tier(&mut self, tier: &Tier) {
        match tier.kind {
            TierKind::Classical => self.c = self.c.max(tier.depth()),
            TierKind::Quantum => self.q = self.q.max(tier.depth()),
        }
        for layer in &tier.layers {
            for gate in &layer.gates {
                *self.gate_counts.entry(gate.kind().name().to_string()).or_default() += 1;
                if gate.kind() == GateKind::Query {
                    self.query_gates += 1;
                    match tier.kind {
                        TierKind::Classical => self.classical_query_gates += 1,
                        TierKind::Quantum => self.quantum_query_gates += 1,
                    }
                }
            }
        }
    }
}

pub fn accounting(c: &Circuit) -> Result<Accounting> {
    ensure_valid(validate(c))?;
    Ok(match c {
        Circuit::Hybrid(h) => hybrid_accounting(h),
        Circuit::Jozsa(j) => jozsa_accounting(j),
    })
}

fn hybrid_accounting(h: &HybridCircuit) -> Accounting {
    let mut acc = Accounting {
        eta: h.tiers.len(),
        g: h.width,
        ..Default::default()
    };
    h.tiers.iter().for_each(|t| acc.add_tier(t));
    acc
}

fn jozsa_accounting(j: &JozsaCircuit) -> Accounting {
    let mut acc = Accounting {
        eta: j.blocks.len(),
        g: j.width,
        ..Default::default()
    };
    for b in &j.blocks {
        acc.add_tier(&b.quantum);
        acc.add_tier(&b.classical);
    }
    acc
}
