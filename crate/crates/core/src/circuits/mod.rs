//! Relativized layered circuits: gates, layers, tiers, hybrid and Jozsa
//! circuits, validation, accounting and the text format.

mod accounting;
mod circuit;
mod gate;
mod layer;
pub mod random;
mod text;
mod tier;
mod validate;

pub use accounting::{accounting, Accounting};
pub use circuit::{Circuit, HybridCircuit, HybridKind, JozsaBlock, JozsaCircuit};
pub use gate::{Gate, GateKind, QueryWires, Wire};
pub use layer::Layer;
pub use text::{parse, parse_validated, print, HEADER};
pub use tier::{Tier, TierKind};
pub use validate::{ensure_valid, validate, validate_hybrid, validate_jozsa, validate_tier, Diagnostic};
