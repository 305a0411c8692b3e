//! Classical simulators for few-tier hybrid and Jozsa circuits.
//!
//! Queries on vertices the simulator does not know are answered INVALID
//! instead of being asked; `Simulator` also measures how far that moves
//! the state from the real one.

mod compare;
mod exact;
mod known;
mod oracle_sim;
mod sim;
mod transcript;
mod wrapper;

pub use compare::{compare_to_reference, simulate_exact, Comparison};
pub use exact::{few_tier_exact, jozsa_exact, BranchStats, ExactSimulation};
pub use known::KnownVertices;
pub use oracle_sim::{simulate_oracle, Branch, BranchCounts, SimulatedLayer};
pub use sim::Simulator;
pub use transcript::{LayerRecord, SimTranscript, TierRecord};
pub use wrapper::{
    classical_tier_sim, few_tier_output, few_tier_query_ceiling, few_tier_wrapper, jozsa_query_ceiling, jozsa_wrapper,
    quantum_layer_sim, quantum_tier_sim, tier_seed, SimRun,
};
