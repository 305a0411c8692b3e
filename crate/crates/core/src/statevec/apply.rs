use std::collections::BTreeMap;

use num_complex::Complex;

use super::state::{Bits, PureState, MAX_WIRES};
use crate::circuits::{Gate, Layer, QueryWires, Wire};
use crate::error::{Error, Result};
use crate::scalar::{Amplitude, Scalar};
use crate::tolerance::Tolerances;
use crate::welded_tree::{BlackBoxTree, ColorCode, Label};

/// Reads `wires` as an integer, first wire least significant.
#[inline]
pub fn read_register(key: u128, wires: &[Wire]) -> u64 {
    wires
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &w)| acc | ((((key >> w) & 1) as u64) << j))
}

/// XORs `value` into `wires`.
#[inline]
pub fn xor_register(key: u128, wires: &[Wire], value: u64) -> u128 {
    wires
        .iter()
        .enumerate()
        .fold(key, |k, (j, &w)| k ^ ((((value >> j) & 1) as u128) << w))
}

/// `(x, c)` seen by a query gate on basis state `key`.
#[inline]
pub fn query_input(key: u128, q: &QueryWires) -> (Label, ColorCode) {
    (Label(read_register(key, &q.x)), read_register(key, &q.c) as ColorCode)
}

/// Basis state after the query gate, given the answer it XORs in.
#[inline]
pub fn query_output(key: u128, q: &QueryWires, answer: Label) -> u128 {
    xor_register(key, &q.y, answer.0)
}

/// Applies one classical reversible gate or query to a basis state.
/// Returns `None` for Hadamard and Phase.
pub fn apply_gate_to_basis(key: u128, gate: &Gate, oracle: &mut dyn FnMut(Label, ColorCode) -> Label) -> Option<u128> {
    let bit = |w: Wire| (key >> w) & 1 == 1;
    Some(match gate {
        Gate::Not(w) => key ^ (1 << w),
        Gate::Cnot { control, target } => {
            if bit(*control) {
                key ^ (1 << target)
            } else {
                key
            }
        }
        Gate::Toffoli { c1, c2, target } => {
            if bit(*c1) && bit(*c2) {
                key ^ (1 << target)
            } else {
                key
            }
        }
        Gate::Query(q) => {
            let (x, c) = query_input(key, q);
            query_output(key, q, oracle(x, c))
        }
        Gate::AncillaIntro(_) | Gate::Discard(_) => key,
        Gate::Hadamard(_) | Gate::Phase(_) => return None,
    })
}

fn apply_gate<T: Scalar>(
    amps: BTreeMap<u128, Amplitude<T>>,
    gate: &Gate,
    oracle: &mut dyn FnMut(Label, ColorCode) -> Label,
) -> BTreeMap<u128, Amplitude<T>> {
    match gate {
        Gate::Hadamard(w) => {
            let m = 1u128 << w;
            let h = T::FRAC_1_SQRT_2();
            let mut out: BTreeMap<u128, Amplitude<T>> = BTreeMap::new();
            for (k, a) in amps {
                let s = a * h;
                let one = k & m != 0;
                *out.entry(k & !m).or_default() += s;
                *out.entry(k | m).or_default() += if one { -s } else { s };
            }
            out
        }
        Gate::Phase(w) => {
            let m = 1u128 << w;
            amps.into_iter()
                .map(|(k, a)| (k, if k & m != 0 { a * Complex::new(T::zero(), T::one()) } else { a }))
                .collect()
        }
        Gate::AncillaIntro(_) | Gate::Discard(_) => amps,
        _ => amps
            .into_iter()
            .map(|(k, a)| (apply_gate_to_basis(k, gate, oracle).unwrap(), a))
            .collect(),
    }
}

/// Width bookkeeping shared by every executor: surplus live wires are traced
/// out, growth appends fresh zero wires.
pub(crate) fn enter_layer(width: usize, live: usize, layer: &Layer) -> Result<(usize, usize)> {
    if layer.width_in > live {
        return Err(Error::WidthMismatch {
            expected: layer.width_in,
            got: live,
        });
    }
    let new_width = width.max(layer.width_out);
    if new_width > MAX_WIRES {
        return Err(Error::WidthCap {
            width: new_width,
            cap: MAX_WIRES,
        });
    }
    Ok((new_width, layer.width_out))
}

/// Applies `layer`, answering queries with `oracle`. Queries XOR the answer
/// into the y-register. The state norm may drift by at most
/// `tol.norm_drift_per_layer`; nothing is renormalized.
pub fn apply_layer_with<T: Scalar>(
    state: &PureState<T>,
    layer: &Layer,
    tol: &Tolerances,
    oracle: &mut dyn FnMut(Label, ColorCode) -> Label,
) -> Result<PureState<T>> {
    let (width, live) = enter_layer(state.width(), state.live(), layer)?;
    let before = state.norm_sqr().to_f64_lossy();
    let mut amps = state.amps().clone();
    for gate in &layer.gates {
        amps = apply_gate(amps, gate, oracle);
    }
    let mut out = PureState::from_parts(width, live, amps);
    out.prune(tol.prune);
    let drift = (out.norm_sqr().to_f64_lossy() - before).abs();
    if drift > tol.norm_drift_per_layer {
        return Err(Error::NormDrift {
            drift,
            tol: tol.norm_drift_per_layer,
        });
    }
    Ok(out)
}

/// Applies `layer` against the real oracle of `tree`.
pub fn apply_layer<T: Scalar>(state: &PureState<T>, layer: &Layer, tree: &BlackBoxTree) -> Result<PureState<T>> {
    apply_layer_with(state, layer, &Tolerances::for_scalar::<T>(), &mut |x, c| tree.answer(x, c))
}

/// A classical basis state with its physical and live widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalRegister {
    pub key: u128,
    pub width: usize,
    pub live: usize,
}

impl ClassicalRegister {
    pub fn new(bits: Bits) -> Self {
        Self {
            key: bits.value(),
            width: bits.len(),
            live: bits.len(),
        }
    }

    pub fn live_bits(&self) -> Bits {
        Bits::new(self.key, self.live)
    }
}

/// Evaluates a classical layer on a basis state.
pub fn apply_layer_classical(
    reg: ClassicalRegister,
    layer: &Layer,
    oracle: &mut dyn FnMut(Label, ColorCode) -> Label,
) -> Result<ClassicalRegister> {
    let (width, live) = enter_layer(reg.width, reg.live, layer)?;
    let mut key = reg.key;
    for gate in &layer.gates {
        key = apply_gate_to_basis(key, gate, oracle)
            .ok_or_else(|| Error::TierKind(format!("{} gate in a classical layer", gate.kind().name())))?;
    }
    Ok(ClassicalRegister { key, width, live })
}
