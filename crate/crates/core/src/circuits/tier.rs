use serde::{Deserialize, Serialize};

use super::layer::Layer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TierKind {
    Classical,
    Quantum,
}

impl TierKind {
    pub fn name(self) -> &'static str {
        match self {
            TierKind::Classical => "classical",
            TierKind::Quantum => "quantum",
        }
    }
}

/// A stack of layers. Quantum tiers end in a full computational-basis
/// measurement, applied by the executors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tier {
    pub kind: TierKind,
    pub width_in: usize,
    pub layers: Vec<Layer>,
}

impl Tier {
    pub fn new(kind: TierKind, width_in: usize, layers: Vec<Layer>) -> Self {
        Self { kind, width_in, layers }
    }

    pub fn quantum(width_in: usize, layers: Vec<Layer>) -> Self {
        Self::new(TierKind::Quantum, width_in, layers)
    }

    pub fn classical(width_in: usize, layers: Vec<Layer>) -> Self {
        Self::new(TierKind::Classical, width_in, layers)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn width_out(&self) -> usize {
        self.layers.last().map_or(self.width_in, |l| l.width_out)
    }

    /// Largest live width reached inside the tier.
    pub fn max_width(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.width_in.max(l.width_out))
            .fold(self.width_in, usize::max)
    }

    /// `(m, s, d)`.
    pub fn arity(&self) -> (usize, usize, usize) {
        (self.width_in, self.width_out(), self.depth())
    }

    pub fn query_count(&self) -> usize {
        self.layers.iter().map(Layer::query_count).sum()
    }
}
