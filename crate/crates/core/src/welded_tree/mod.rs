//! Random welded black-box trees and their oracle.

mod coloring;
mod consistent;
mod counting;
mod labels;
mod oracle;
mod serialize;
mod structure;

pub use coloring::{edge_key, is_valid_color, ColorCode, EdgeColoring, EdgeKey, NUM_COLORS};
pub use consistent::{replays, sample_consistent, sample_consistent_with, SamplingMode};
pub use counting::{check_entries, count_consistent, falling_factorial};
pub use labels::{label_mask, usable_labels, Label};
pub use oracle::{BlackBoxTree, Oracle, OracleHandle};
pub use serialize::{load_tree, save_tree, TreeDocument};
pub use structure::{Side, TreeStructure, Vertex};

/// Largest supported height. Labels then take 40 bits and the tree has
/// about four million vertices.
pub const MAX_HEIGHT: u32 = 20;

pub fn generate_structure(n: u32, seed: u64) -> crate::Result<TreeStructure> {
    TreeStructure::generate(n, seed)
}

pub fn generate_coloring(structure: &TreeStructure, seed: u64) -> crate::Result<EdgeColoring> {
    EdgeColoring::generate(structure, seed)
}
