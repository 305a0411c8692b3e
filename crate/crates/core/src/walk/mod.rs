//! Continuous-time quantum walk on the welded tree, in the column basis and
//! on the full graph, and a classical random walker for comparison.

mod classical;
mod full;
mod reduced;
mod sweep;

pub use classical::{classical_walker, walker_success_rate, WalkerRate};
pub use full::{full_graph_walk, full_graph_evolve, FullGraphState, FULL_GRAPH_MAX_HEIGHT};
pub use reduced::{build_reduced, evolve_exit_probability, ReducedWalk};
pub use sweep::{curve_csv, sweep, Sweep};
