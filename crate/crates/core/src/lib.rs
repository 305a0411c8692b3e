//! Welded-tree oracle, relativized hybrid circuits, an exact sparse
//! executor, and the classical simulators that track it.

pub mod bottleneck_sim;
pub mod circuits;
pub mod error;
pub mod hybrid_sim;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod statevec;
pub mod tolerance;
pub mod walk;
pub mod welded_tree;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PureStateF64 = statevec::PureState<f64>;
pub type PureStateF32 = statevec::PureState<f32>;
pub type SimulatorF64<'a> = hybrid_sim::Simulator<'a, f64>;
pub type SimulatorF32<'a> = hybrid_sim::Simulator<'a, f32>;
pub type BottleneckSimulatorF64<'a> = bottleneck_sim::BottleneckSimulator<'a, f64, welded_tree::OracleHandle<'a>>;
