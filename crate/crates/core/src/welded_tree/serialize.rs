use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::coloring::EdgeColoring;
use super::labels::Label;
use super::oracle::BlackBoxTree;
use super::structure::TreeStructure;

/// On-disk form of a black-box tree.
///
/// `vertex_colors[v]` lists the colors of `v`'s edges as digits, in the
/// adjacency order fixed by the weld cycle. `labels` holds zero-padded hex
/// strings in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub n: u32,
    pub weld_cycle: Vec<usize>,
    pub vertex_colors: Vec<String>,
    pub labels: Vec<String>,
}

impl TreeDocument {
    pub fn from_tree(tree: &BlackBoxTree) -> Self {
        let n = tree.height();
        Self {
            n,
            weld_cycle: tree.structure().weld_cycle().to_vec(),
            vertex_colors: tree.coloring().to_strings(),
            labels: tree.labels().iter().map(|l| l.to_hex(n)).collect(),
        }
    }

    pub fn into_tree(self) -> Result<BlackBoxTree> {
        let structure = TreeStructure::from_weld_cycle(self.n, self.weld_cycle)?;
        let coloring = EdgeColoring::from_strings(&structure, &self.vertex_colors)?;
        let labels = self
            .labels
            .iter()
            .map(|s| Label::from_hex(self.n, s))
            .collect::<Result<Vec<_>>>()?;
        BlackBoxTree::from_parts(Arc::new(structure), Arc::new(coloring), labels)
    }
}

/// Pretty JSON with a trailing newline.
pub fn save_tree(tree: &BlackBoxTree) -> String {
    let mut s = serde_json::to_string_pretty(&TreeDocument::from_tree(tree)).expect("tree document serializes");
    s.push('\n');
    s
}

pub fn load_tree(text: &str) -> Result<BlackBoxTree> {
    let doc: TreeDocument = serde_json::from_str(text).map_err(|e| Error::TreeDocument(e.to_string()))?;
    doc.into_tree()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_load_save_is_byte_stable() {
        for seed in 0..10 {
            let t = BlackBoxTree::generate(3, seed).unwrap();
            let a = save_tree(&t);
            let b = save_tree(&load_tree(&a).unwrap());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn tampered_labels_rejected() {
        let t = BlackBoxTree::generate(2, 0).unwrap();
        let mut doc = TreeDocument::from_tree(&t);
        doc.labels[3] = doc.labels[4].clone();
        assert!(doc.into_tree().is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let t = BlackBoxTree::generate(2, 0).unwrap();
        let text = save_tree(&t).replacen('{', "{\"extra\": 1,", 1);
        assert!(load_tree(&text).is_err());
    }
}
