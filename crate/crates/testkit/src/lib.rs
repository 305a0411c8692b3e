//! Independent brute-force oracles for tests.

pub mod adversary;
pub mod agreement;
pub mod counting;
pub mod dense;
pub mod enumerate;
pub mod synthetic;

pub use adversary::guess_circuit;
pub use agreement::{estimator_agreement, two_hop, Agreement};
pub use counting::brute_count_labelings;
pub use dense::{layer_matrix, run_layers, DENSE_WIDTH_CAP};
pub use enumerate::{exhaustive_estimates, history_candidates, place_along_colors, Exhaustive};
pub use synthetic::SyntheticOracle;
