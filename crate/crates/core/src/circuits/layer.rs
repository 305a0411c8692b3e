use serde::{Deserialize, Serialize};

use super::gate::{Gate, GateKind, Wire};

/// A depth-1 slice. Wires `0..width_in` are live on entry and
/// `0..width_out` on exit. Growth introduces exactly the wires
/// `width_in..width_out`; shrinking discards exactly `width_out..width_in`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layer {
    pub width_in: usize,
    pub width_out: usize,
    pub gates: Vec<Gate>,
}

impl Layer {
    pub fn new(width_in: usize, width_out: usize, gates: Vec<Gate>) -> Self {
        Self {
            width_in,
            width_out,
            gates,
        }
    }

    /// A layer with no gates on `width` wires.
    pub fn identity(width: usize) -> Self {
        Self::new(width, width, Vec::new())
    }

    /// A width-preserving layer.
    pub fn square(width: usize, gates: Vec<Gate>) -> Self {
        Self::new(width, width, gates)
    }

    /// Layer that grows from `from` to `to` wires with ancillas.
    pub fn grow(from: usize, to: usize) -> Self {
        Self::new(from, to, (from..to).map(Gate::AncillaIntro).collect())
    }

    pub fn query_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_query()).count()
    }

    pub fn has_queries(&self) -> bool {
        self.gates.iter().any(Gate::is_query)
    }

    pub fn is_classical(&self) -> bool {
        self.gates.iter().all(|g| g.kind().is_classical())
    }

    /// Splits into `(L_G, L_T)`: everything but queries, then the queries.
    /// Applying `L_G` and then `L_T` equals applying the layer, because the
    /// two parts touch disjoint wires.
    pub fn split(&self) -> (Layer, Layer) {
        let (queries, others): (Vec<Gate>, Vec<Gate>) = self.gates.iter().cloned().partition(Gate::is_query);
        (
            Layer::new(self.width_in, self.width_out, others),
            Layer::new(self.width_out, self.width_out, queries),
        )
    }

    pub fn touched_wires(&self) -> Vec<Wire> {
        let mut ws: Vec<Wire> = self
            .gates
            .iter()
            .filter(|g| g.kind() != GateKind::AncillaIntro && g.kind() != GateKind::Discard)
            .flat_map(Gate::wires)
            .collect();
        ws.sort_unstable();
        ws
    }
}
