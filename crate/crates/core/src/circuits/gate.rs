use serde::{Deserialize, Serialize};

/// Wire index within a tier.
pub type Wire = usize;

/// Wiring of a query gate. Register values read the listed wires as bits,
/// first wire least significant. The gate maps `|x, c, y>` to
/// `|x, c, y XOR K(x, c)>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryWires {
    pub x: Vec<Wire>,
    pub c: [Wire; 4],
    pub y: Vec<Wire>,
}

impl QueryWires {
    /// `x`, `c` and `y` as consecutive blocks starting at `start`.
    pub fn contiguous(n: u32, start: Wire) -> Self {
        let k = 2 * n as usize;
        Self {
            x: (start..start + k).collect(),
            c: [start + k, start + k + 1, start + k + 2, start + k + 3],
            y: (start + k + 4..start + 2 * k + 4).collect(),
        }
    }

    pub fn all_wires(&self) -> Vec<Wire> {
        self.x.iter().chain(&self.c).chain(&self.y).copied().collect()
    }

    /// Total wire count for height `n`.
    pub fn width_for(n: u32) -> usize {
        4 * n as usize + 4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    Hadamard,
    Phase,
    Not,
    Cnot,
    Toffoli,
    Query,
    AncillaIntro,
    Discard,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::Hadamard,
        GateKind::Phase,
        GateKind::Not,
        GateKind::Cnot,
        GateKind::Toffoli,
        GateKind::Query,
        GateKind::AncillaIntro,
        GateKind::Discard,
    ];

    /// Name used in the circuit text format.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Hadamard => "H",
            GateKind::Phase => "S",
            GateKind::Not => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Query => "QUERY",
            GateKind::AncillaIntro => "ANC",
            GateKind::Discard => "DISCARD",
        }
    }

    pub fn from_name(s: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Allowed in classical layers.
    pub fn is_classical(self) -> bool {
        !matches!(self, GateKind::Hadamard | GateKind::Phase)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    Hadamard(Wire),
    /// `diag(1, i)`.
    Phase(Wire),
    Not(Wire),
    Cnot { control: Wire, target: Wire },
    Toffoli { c1: Wire, c2: Wire, target: Wire },
    Query(QueryWires),
    /// Brings a fresh wire in state `|0>`.
    AncillaIntro(Wire),
    /// Drops a wire. Executors keep it and leave it out of outputs.
    Discard(Wire),
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Hadamard(_) => GateKind::Hadamard,
            Gate::Phase(_) => GateKind::Phase,
            Gate::Not(_) => GateKind::Not,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Toffoli { .. } => GateKind::Toffoli,
            Gate::Query(_) => GateKind::Query,
            Gate::AncillaIntro(_) => GateKind::AncillaIntro,
            Gate::Discard(_) => GateKind::Discard,
        }
    }

    /// Wires in text-format order.
    pub fn wires(&self) -> Vec<Wire> {
        match self {
            Gate::Hadamard(w) | Gate::Phase(w) | Gate::Not(w) | Gate::AncillaIntro(w) | Gate::Discard(w) => vec![*w],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Toffoli { c1, c2, target } => vec![*c1, *c2, *target],
            Gate::Query(q) => q.all_wires(),
        }
    }

    pub fn is_query(&self) -> bool {
        matches!(self, Gate::Query(_))
    }
}
