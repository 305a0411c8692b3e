//! Exact sparse state-vector execution of relativized circuits against a
//! black-box tree.

mod apply;
mod exec;
mod state;
mod success;

pub use apply::{
    apply_gate_to_basis, apply_layer, apply_layer_classical, apply_layer_with, query_input, query_output,
    read_register, xor_register, ClassicalRegister,
};
pub use exec::{
    quantum_tier_state, run_circuit, run_circuit_exact, run_classical_tier, run_hybrid, run_hybrid_exact, run_jozsa,
    run_jozsa_exact, run_quantum_tier, tier_distribution, BRANCH_CAP,
};
pub(crate) use exec::pick;
pub use state::{Bits, OutputDistribution, PureState, MAX_WIRES};
pub use success::success_probability;
