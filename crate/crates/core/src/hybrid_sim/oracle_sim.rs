use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::known::KnownVertices;
use crate::circuits::{Gate, Layer, QueryWires};
use crate::error::{Error, Result};
use crate::statevec::{query_input, query_output};
use crate::welded_tree::{is_valid_color, ColorCode, Label, Oracle};

/// How one query on one basis state was answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `x` is a key vertex of the dictionary.
    Stored,
    /// `x` is a known vertex that is not a key yet; a real query was made
    /// unless the color was invalid.
    Expanded,
    /// Anything else; the answer is taken to be INVALID.
    Assumed,
}

/// Branch tallies over one simulated query layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BranchCounts {
    pub stored: u64,
    pub expanded: u64,
    pub assumed: u64,
}

impl BranchCounts {
    fn bump(&mut self, b: Branch) {
        match b {
            Branch::Stored => self.stored += 1,
            Branch::Expanded => self.expanded += 1,
            Branch::Assumed => self.assumed += 1,
        }
    }
}

/// Result of simulating a query layer on a set of basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedLayer {
    /// `S(z)` for every `z` in the support it was evaluated on.
    pub map: BTreeMap<u128, u128>,
    /// The updated dictionary.
    pub known: KnownVertices,
    /// Vertices queried (nine oracle calls each).
    pub vertex_queries: u64,
    pub branches: BranchCounts,
}

/// Answers queries for one layer. Branch decisions read the dictionary as
/// it was when the layer started; answers read the growing copy.
pub(crate) struct LayerOracle<'v> {
    before: &'v KnownVertices,
    labels: BTreeSet<Label>,
    pub(crate) temp: KnownVertices,
    pub(crate) vertex_queries: u64,
    pub(crate) branches: BranchCounts,
}

impl<'v> LayerOracle<'v> {
    pub(crate) fn new(before: &'v KnownVertices) -> Self {
        Self {
            before,
            labels: before.labels(),
            temp: before.clone(),
            vertex_queries: 0,
            branches: BranchCounts::default(),
        }
    }

    pub(crate) fn answer<O: Oracle + ?Sized>(&mut self, x: Label, c: ColorCode, oracle: &mut O) -> (Label, Branch) {
        let invalid = self.before.invalid();
        let out = if self.before.is_key_vertex(x) {
            (self.before.get(x, c), Branch::Stored)
        } else if self.labels.contains(&x) {
            if is_valid_color(c) {
                self.vertex_queries += self.temp.expand(x, oracle) / 9;
            }
            (self.temp.get(x, c), Branch::Expanded)
        } else {
            (invalid, Branch::Assumed)
        };
        self.branches.bump(out.1);
        out
    }

    /// `S(z)` for the given query gates.
    pub(crate) fn apply<O: Oracle + ?Sized>(&mut self, z: u128, queries: &[&QueryWires], oracle: &mut O) -> u128 {
        let mut out = z;
        for q in queries {
            let (x, c) = query_input(z, q);
            let (a, _) = self.answer(x, c, oracle);
            out = query_output(out, q, a);
        }
        out
    }
}

/// The query gates of `layer`, failing on any other gate.
pub(crate) fn query_gates(layer: &Layer) -> Result<Vec<&QueryWires>> {
    layer
        .gates
        .iter()
        .map(|g| match g {
            Gate::Query(q) => Ok(q),
            _ => Err(Error::NonQueryGate),
        })
        .collect()
}

/// Simulates the query-only `layer` on each basis state of `support`
/// without querying unknown vertices.
pub fn simulate_oracle<O: Oracle + ?Sized>(
    known: &KnownVertices,
    oracle: &mut O,
    layer: &Layer,
    support: impl IntoIterator<Item = u128>,
) -> Result<SimulatedLayer> {
    let queries = query_gates(layer)?;
    let mut lo = LayerOracle::new(known);
    let mut map = BTreeMap::new();
    for z in support {
        let s = lo.apply(z, &queries, oracle);
        map.insert(z, s);
    }
    Ok(SimulatedLayer {
        map,
        known: lo.temp,
        vertex_queries: lo.vertex_queries,
        branches: lo.branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::xor_register;
    use crate::welded_tree::BlackBoxTree;

    fn query_layer(n: u32) -> (Layer, QueryWires) {
        let q = QueryWires::contiguous(n, 0);
        let w = QueryWires::width_for(n);
        (Layer::square(w, vec![Gate::Query(q.clone())]), q)
    }

    fn encode(q: &QueryWires, x: Label, c: ColorCode) -> u128 {
        xor_register(xor_register(0, &q.x, x.0), &q.c, c as u64)
    }

    #[test]
    fn stored_answer_costs_nothing() {
        let tree = BlackBoxTree::generate(2, 9).unwrap();
        let mut h = tree.handle();
        let v = KnownVertices::entrance(&mut h);
        let (layer, q) = query_layer(2);
        let c = (1..=9).find(|&c| tree.answer(Label::ENTRANCE, c) != tree.invalid()).unwrap();
        let z = encode(&q, Label::ENTRANCE, c);
        let before = h.queries();
        let s = simulate_oracle(&v, &mut h, &layer, [z]).unwrap();
        assert_eq!(h.queries(), before);
        assert_eq!(s.vertex_queries, 0);
        let child = tree.answer(Label::ENTRANCE, c);
        assert_eq!(s.map[&z], query_output(z, &q, child));
    }

    #[test]
    fn known_value_spends_one_vertex_query() {
        let tree = BlackBoxTree::generate(2, 9).unwrap();
        let mut h = tree.handle();
        let v = KnownVertices::entrance(&mut h);
        let (layer, q) = query_layer(2);
        let child = v.frontier().into_iter().next().unwrap();
        let c = (1..=9).find(|&c| tree.answer(child, c) != Label::ENTRANCE).unwrap();
        let z = encode(&q, child, c);
        let s = simulate_oracle(&v, &mut h, &layer, [z]).unwrap();
        assert_eq!(s.vertex_queries, 1);
        assert_eq!(s.map[&z], query_output(z, &q, tree.answer(child, c)));
        assert!(s.known.is_key_vertex(child));
    }

    #[test]
    fn unknown_label_reads_invalid() {
        let tree = BlackBoxTree::generate(2, 9).unwrap();
        let mut h = tree.handle();
        let v = KnownVertices::entrance(&mut h);
        let (layer, q) = query_layer(2);
        let known = v.labels();
        let x = (1..15).map(Label).find(|l| !known.contains(l)).unwrap();
        let z = encode(&q, x, 3);
        let before = h.queries();
        let s = simulate_oracle(&v, &mut h, &layer, [z]).unwrap();
        assert_eq!(h.queries(), before);
        assert_eq!(s.map[&z], query_output(z, &q, tree.invalid()));
        assert_eq!(s.branches.assumed, 1);
    }

    #[test]
    fn rejects_non_query_gates() {
        let tree = BlackBoxTree::generate(2, 9).unwrap();
        let v = KnownVertices::new(2);
        let layer = Layer::square(12, vec![Gate::Hadamard(0)]);
        assert_eq!(simulate_oracle(&v, &mut tree.handle(), &layer, [0]), Err(Error::NonQueryGate));
    }
}
