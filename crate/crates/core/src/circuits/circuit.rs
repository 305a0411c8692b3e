use serde::{Deserialize, Serialize};

use super::tier::{Tier, TierKind};

/// Tier layout of a [`HybridCircuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HybridKind {
    /// Classical `(n,g,c)` first tier, then alternating quantum and
    /// classical tiers of arity `(g,g,·)`.
    Alternating,
    /// Every tier quantum: `(n,g,q)` first, then `(g,g,q)`.
    AllQuantum,
}

impl HybridKind {
    pub fn expected_tier(self, index: usize) -> TierKind {
        match self {
            HybridKind::Alternating if index % 2 == 0 => TierKind::Classical,
            _ => TierKind::Quantum,
        }
    }
}

/// Composition of tiers run on the input `0^n`. The output is the final
/// tier's output, and its first `2n` bits are read as the exit guess.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HybridCircuit {
    pub n: u32,
    pub width: usize,
    pub kind: HybridKind,
    pub tiers: Vec<Tier>,
}

impl HybridCircuit {
    pub fn new(n: u32, width: usize, kind: HybridKind, tiers: Vec<Tier>) -> Self {
        Self { n, width, kind, tiers }
    }

    pub fn input_width(&self) -> usize {
        self.n as usize
    }

    pub fn output_width(&self) -> usize {
        self.tiers.last().map_or(self.input_width(), Tier::width_out)
    }

    /// The first `i` tiers as a circuit of their own.
    pub fn prefix(&self, i: usize) -> HybridCircuit {
        HybridCircuit {
            tiers: self.tiers[..i.min(self.tiers.len())].to_vec(),
            ..self.clone()
        }
    }
}

/// Quantum tier followed by measurement of `R1` and a classical tier on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JozsaBlock {
    pub quantum: Tier,
    pub classical: Tier,
}

/// `Q_1 ((Pi C_1) x I) Q_2 ... Q_eta ((Pi C_eta) x I)`. `R1` is wires
/// `0..r1_width`, `R2` the rest. `Pi` measures `R1`; the classical tiers act
/// on `R1` only. The output is `R1` after the last classical tier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JozsaCircuit {
    pub n: u32,
    pub width: usize,
    pub r1_width: usize,
    pub blocks: Vec<JozsaBlock>,
}

impl JozsaCircuit {
    /// A circuit with `R1` of the standard size `width / 2`.
    pub fn new(n: u32, width: usize, blocks: Vec<JozsaBlock>) -> Self {
        Self {
            n,
            width,
            r1_width: width / 2,
            blocks,
        }
    }

    pub fn input_width(&self) -> usize {
        self.n as usize
    }
}

/// Either circuit family, as read from a circuit file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Circuit {
    Hybrid(HybridCircuit),
    Jozsa(JozsaCircuit),
}

impl Circuit {
    pub fn n(&self) -> u32 {
        match self {
            Circuit::Hybrid(h) => h.n,
            Circuit::Jozsa(j) => j.n,
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Circuit::Hybrid(h) => h.width,
            Circuit::Jozsa(j) => j.width,
        }
    }
}

impl From<HybridCircuit> for Circuit {
    fn from(h: HybridCircuit) -> Self {
        Circuit::Hybrid(h)
    }
}

impl From<JozsaCircuit> for Circuit {
    fn from(j: JozsaCircuit) -> Self {
        Circuit::Jozsa(j)
    }
}
