mod discovery;
mod e2e;
mod simulate;
mod walk;

pub use discovery::{cmd_discovery, discovery_bound, discovery_counts, discovery_trial};
pub use e2e::{cmd_e2e, walker_budget};
pub use simulate::{cmd_simulate, family_circuit, tv_envelope};
pub use walk::cmd_walk;
