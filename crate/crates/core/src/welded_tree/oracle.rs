use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

use super::coloring::{ColorCode, EdgeColoring};
use super::labels::{draw_distinct, Label};
use super::structure::{TreeStructure, Vertex};

/// A welded tree with its coloring and an injective labeling. Immutable and
/// cheap to clone; structure and coloring are shared.
#[derive(Debug, Clone)]
pub struct BlackBoxTree {
    structure: Arc<TreeStructure>,
    coloring: Arc<EdgeColoring>,
    labels: Vec<Label>,
    inverse: HashMap<Label, Vertex>,
}

/// Seed streams used by [`BlackBoxTree::generate`].
const STRUCTURE_STREAM: u64 = 0;
const COLORING_STREAM: u64 = 1;
const LABEL_STREAM: u64 = 2;

impl BlackBoxTree {
    /// Structure, coloring and labels, each from its own stream derived from `seed`.
    pub fn generate(n: u32, seed: u64) -> Result<Self> {
        let structure = TreeStructure::generate(n, derive_seed(seed, STRUCTURE_STREAM))?;
        let coloring = EdgeColoring::generate(&structure, derive_seed(seed, COLORING_STREAM))?;
        Self::generate_labels(Arc::new(structure), Arc::new(coloring), derive_seed(seed, LABEL_STREAM))
    }

    /// Uniform injective labeling with the entrance fixed to `0`.
    pub fn generate_labels(
        structure: Arc<TreeStructure>,
        coloring: Arc<EdgeColoring>,
        seed: u64,
    ) -> Result<Self> {
        let n = structure.height();
        let mut rng = rng_from_seed(seed);
        let others = draw_distinct(n, structure.vertex_count() - 1, &mut rng)?;
        let mut labels = Vec::with_capacity(structure.vertex_count());
        labels.push(Label::ENTRANCE);
        labels.extend(others);
        Self::from_parts(structure, coloring, labels)
    }

    /// Draws a fresh labeling of the same structure and coloring.
    pub fn relabel(&self, seed: u64) -> Result<Self> {
        Self::generate_labels(self.structure.clone(), self.coloring.clone(), seed)
    }

    pub fn from_parts(
        structure: Arc<TreeStructure>,
        coloring: Arc<EdgeColoring>,
        labels: Vec<Label>,
    ) -> Result<Self> {
        let n = structure.height();
        if labels.len() != structure.vertex_count() {
            return Err(Error::TreeDocument(format!(
                "{} labels for {} vertices",
                labels.len(),
                structure.vertex_count()
            )));
        }
        if labels[structure.entrance()] != Label::ENTRANCE {
            return Err(Error::TreeDocument("entrance label must be all zeros".into()));
        }
        let mut inverse = HashMap::with_capacity(labels.len());
        for (v, &l) in labels.iter().enumerate() {
            if l.0 > Label::invalid(n).0 || l.is_invalid(n) {
                return Err(Error::TreeDocument(format!("vertex {v} has an unusable label {l}")));
            }
            if inverse.insert(l, v).is_some() {
                return Err(Error::TreeDocument(format!("label {l} used twice")));
            }
        }
        Ok(Self {
            structure,
            coloring,
            labels,
            inverse,
        })
    }

    pub fn height(&self) -> u32 {
        self.structure.height()
    }

    pub fn structure(&self) -> &TreeStructure {
        &self.structure
    }

    pub fn shared_structure(&self) -> &Arc<TreeStructure> {
        &self.structure
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.coloring
    }

    pub fn shared_coloring(&self) -> &Arc<EdgeColoring> {
        &self.coloring
    }

    pub fn label(&self, v: Vertex) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn vertex_of(&self, l: Label) -> Option<Vertex> {
        self.inverse.get(&l).copied()
    }

    pub fn is_valid_label(&self, l: Label) -> bool {
        self.inverse.contains_key(&l)
    }

    pub fn invalid(&self) -> Label {
        Label::invalid(self.height())
    }

    /// Hidden exit label. For grading only.
    pub fn exit_label(&self) -> Label {
        self.labels[self.structure.exit()]
    }

    /// The oracle's answer without touching any counter.
    pub fn answer(&self, x: Label, c: ColorCode) -> Label {
        self.vertex_of(x)
            .and_then(|v| self.coloring.neighbor(v, c))
            .map(|w| self.labels[w])
            .unwrap_or_else(|| self.invalid())
    }

    /// A counted query handle.
    pub fn handle(&self) -> OracleHandle<'_> {
        OracleHandle { tree: self, queries: 0 }
    }

    /// Checks labeling invariants. Structure and coloring have their own checks.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.height();
        if self.labels[self.structure.entrance()] != Label::ENTRANCE {
            return Err("entrance not labeled 0".into());
        }
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.labels.len() {
            return Err("labels not injective".into());
        }
        if self.labels.iter().any(|l| l.is_invalid(n)) {
            return Err("INVALID used as a label".into());
        }
        for (v, &l) in self.labels.iter().enumerate() {
            if self.vertex_of(l) != Some(v) {
                return Err(format!("inverse label wrong at {v}"));
            }
        }
        Ok(())
    }
}

/// Oracle access to a black-box tree: `query(x, c)` returns the label of the
/// `c`-neighbour of `x`, or INVALID.
pub trait Oracle {
    fn height(&self) -> u32;
    fn query(&mut self, x: Label, c: ColorCode) -> Label;
    /// Number of `query` calls so far.
    fn queries(&self) -> u64;
}

/// Per-worker query counter over a shared tree.
#[derive(Debug, Clone)]
pub struct OracleHandle<'a> {
    tree: &'a BlackBoxTree,
    queries: u64,
}

impl<'a> OracleHandle<'a> {
    pub fn tree(&self) -> &'a BlackBoxTree {
        self.tree
    }

    /// Adds another handle's count into this one.
    pub fn merge(&mut self, other: OracleHandle<'_>) {
        self.queries += other.queries;
    }
}

impl Oracle for OracleHandle<'_> {
    fn height(&self) -> u32 {
        self.tree.height()
    }

    fn query(&mut self, x: Label, c: ColorCode) -> Label {
        self.queries += 1;
        self.tree.answer(x, c)
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::welded_tree::coloring::NUM_COLORS;

    #[test]
    fn entrance_is_zero_and_invalid_unused() {
        let t = BlackBoxTree::generate(3, 11).unwrap();
        assert_eq!(t.label(0), Label::ENTRANCE);
        assert!(!t.is_valid_label(t.invalid()));
        t.check_invariants().unwrap();
    }

    #[test]
    fn invalid_input_answers_invalid() {
        let t = BlackBoxTree::generate(2, 4).unwrap();
        let mut h = t.handle();
        for c in 0..16 {
            assert_eq!(h.query(t.invalid(), c), t.invalid());
        }
        assert_eq!(h.queries(), 16);
    }

    #[test]
    fn entrance_answers() {
        let t = BlackBoxTree::generate(3, 2).unwrap();
        let mut valid = Vec::new();
        for c in 1..=NUM_COLORS {
            let a = t.answer(Label::ENTRANCE, c);
            if a != t.invalid() {
                valid.push(a);
                assert_eq!(t.structure().column(t.vertex_of(a).unwrap()), 1);
            }
        }
        assert_eq!(valid.len(), 2);
    }

    #[test]
    fn query_back_returns_start() {
        let t = BlackBoxTree::generate(4, 9).unwrap();
        for &x in t.labels() {
            for c in 1..=NUM_COLORS {
                let y = t.answer(x, c);
                if y != t.invalid() {
                    assert_eq!(t.answer(y, c), x);
                }
            }
        }
    }

    #[test]
    fn exit_label_is_the_far_degree_two_vertex() {
        let t = BlackBoxTree::generate(2, 0).unwrap();
        let exit = t.vertex_of(t.exit_label()).unwrap();
        assert_eq!(t.structure().column(exit), 5);
        assert_eq!(t.structure().neighbors(exit).len(), 2);
        assert_ne!(t.exit_label(), Label::ENTRANCE);
        assert_ne!(t.exit_label(), t.invalid());
    }

    #[test]
    fn n1_cannot_be_labeled() {
        assert!(matches!(
            BlackBoxTree::generate(1, 0),
            Err(Error::LabelSpaceTooSmall { n: 1, .. })
        ));
    }
}
