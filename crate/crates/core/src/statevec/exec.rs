use std::collections::BTreeMap;

use rand::RngCore;

use super::apply::{apply_layer_classical, apply_layer_with, ClassicalRegister};
use super::state::{Bits, OutputDistribution, PureState};
use crate::circuits::{ensure_valid, validate_hybrid, validate_jozsa, Circuit, HybridCircuit, JozsaCircuit, Tier, TierKind};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, unit_f64};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;
use crate::welded_tree::{BlackBoxTree, ColorCode, Label};

/// Most intermediate branches the exact executors track.
pub const BRANCH_CAP: usize = 1 << 20;

/// State after the layers of a quantum tier, before its measurement.
pub fn quantum_tier_state<T: Scalar>(
    input: Bits,
    tier: &Tier,
    tol: &Tolerances,
    oracle: &mut dyn FnMut(Label, ColorCode) -> Label,
) -> Result<PureState<T>> {
    let mut state = PureState::basis(input.resized(tier.width_in));
    for layer in &tier.layers {
        state = apply_layer_with(&state, layer, tol, oracle)?;
    }
    Ok(state)
}

/// Runs a quantum tier and samples its final measurement.
pub fn run_quantum_tier<T: Scalar>(input: Bits, tier: &Tier, tree: &BlackBoxTree, seed: u64) -> Result<Bits> {
    if tier.kind != TierKind::Quantum {
        return Err(Error::TierKind("expected a quantum tier".into()));
    }
    let tol = Tolerances::for_scalar::<T>();
    let state: PureState<T> = quantum_tier_state(input, tier, &tol, &mut |x, c| tree.answer(x, c))?;
    Ok(state.measure_live(&mut rng_from_seed(seed)))
}

/// Evaluates a classical tier.
pub fn run_classical_tier(input: Bits, tier: &Tier, oracle: &mut dyn FnMut(Label, ColorCode) -> Label) -> Result<Bits> {
    let mut reg = ClassicalRegister::new(input.resized(tier.width_in));
    for layer in &tier.layers {
        reg = apply_layer_classical(reg, layer, oracle)?;
    }
    Ok(reg.live_bits())
}

fn run_tier_sampled<T: Scalar, R: RngCore>(input: Bits, tier: &Tier, tree: &BlackBoxTree, rng: &mut R) -> Result<Bits> {
    let mut oracle = |x, c| tree.answer(x, c);
    match tier.kind {
        TierKind::Classical => run_classical_tier(input, tier, &mut oracle),
        TierKind::Quantum => {
            let tol = Tolerances::for_scalar::<T>();
            let state: PureState<T> = quantum_tier_state(input, tier, &tol, &mut oracle)?;
            Ok(state.measure_live(rng))
        }
    }
}

/// One sampled run of a hybrid circuit.
pub fn run_hybrid<T: Scalar>(circuit: &HybridCircuit, tree: &BlackBoxTree, seed: u64) -> Result<Bits> {
    ensure_valid(validate_hybrid(circuit))?;
    let mut rng = rng_from_seed(seed);
    let mut x = Bits::zeros(circuit.input_width());
    for tier in &circuit.tiers {
        x = run_tier_sampled::<T, _>(x, tier, tree, &mut rng)?;
    }
    Ok(x)
}

fn check_exact_width(width: usize, tol: &Tolerances) -> Result<()> {
    if width > tol.exact_width_cap {
        return Err(Error::WidthCap {
            width,
            cap: tol.exact_width_cap,
        });
    }
    Ok(())
}

/// Exact output distribution of a single tier from a fixed input.
pub fn tier_distribution<T: Scalar>(
    input: Bits,
    tier: &Tier,
    tol: &Tolerances,
    oracle: &mut dyn FnMut(Label, ColorCode) -> Label,
) -> Result<OutputDistribution> {
    match tier.kind {
        TierKind::Classical => Ok(OutputDistribution::point(run_classical_tier(input, tier, oracle)?)),
        TierKind::Quantum => {
            let state: PureState<T> = quantum_tier_state(input, tier, tol, oracle)?;
            let live = state.live();
            let mut d = OutputDistribution::default();
            for (k, p) in state.live_distribution() {
                d.add(Bits::new(k, live), p);
            }
            Ok(d)
        }
    }
}

/// Exact output distribution of a hybrid circuit, branching over every
/// intermediate measurement outcome.
pub fn run_hybrid_exact<T: Scalar>(circuit: &HybridCircuit, tree: &BlackBoxTree) -> Result<OutputDistribution> {
    ensure_valid(validate_hybrid(circuit))?;
    let tol = Tolerances::for_scalar::<T>();
    check_exact_width(circuit.width, &tol)?;
    let mut dist = OutputDistribution::point(Bits::zeros(circuit.input_width()));
    let mut oracle = |x, c| tree.answer(x, c);
    for tier in &circuit.tiers {
        let mut next = OutputDistribution::default();
        for (&x, &p) in &dist.probs {
            for (y, q) in tier_distribution::<T>(x, tier, &tol, &mut oracle)?.probs {
                next.add(y, p * q);
            }
        }
        if next.probs.len() > BRANCH_CAP {
            return Err(Error::BranchCap(BRANCH_CAP));
        }
        dist = next;
    }
    Ok(dist)
}

/// Picks an index from `weights` with one uniform draw.
pub(crate) fn pick<R: RngCore>(weights: impl Iterator<Item = f64> + Clone, rng: &mut R) -> usize {
    let total: f64 = weights.clone().sum();
    let u = unit_f64(rng.next_u64()) * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Runs the layers of a Jozsa quantum tier. Only `R1` is measured
/// afterwards, so the tier's own final measurement is not applied.
fn jozsa_quantum<T: Scalar>(
    state: PureState<T>,
    tier: &Tier,
    tol: &Tolerances,
    oracle: &mut dyn FnMut(Label, ColorCode) -> Label,
) -> Result<PureState<T>> {
    let mut state = state;
    for layer in &tier.layers {
        state = apply_layer_with(&state, layer, tol, oracle)?;
    }
    Ok(state)
}

/// One sampled run of a Jozsa circuit.
pub fn run_jozsa<T: Scalar>(circuit: &JozsaCircuit, tree: &BlackBoxTree, seed: u64) -> Result<Bits> {
    ensure_valid(validate_jozsa(circuit))?;
    let tol = Tolerances::for_scalar::<T>();
    let mut rng = rng_from_seed(seed);
    let mut oracle = |x, c| tree.answer(x, c);
    let r1 = circuit.r1_width;
    let mut state = PureState::<T>::basis(Bits::zeros(circuit.input_width()));
    let mut out = Bits::zeros(r1);
    for block in &circuit.blocks {
        state = jozsa_quantum(state, &block.quantum, &tol, &mut oracle)?;
        let mut parts = state.condition_on_low(r1);
        let k = pick(parts.iter().map(|p| p.1), &mut rng);
        let (outcome, _, post) = parts.swap_remove(k);
        out = run_classical_tier(Bits::new(outcome, r1), &block.classical, &mut oracle)?;
        state = post.overwrite_low(r1, out.value());
    }
    Ok(out)
}

/// Exact output distribution of a Jozsa circuit.
pub fn run_jozsa_exact<T: Scalar>(circuit: &JozsaCircuit, tree: &BlackBoxTree) -> Result<OutputDistribution> {
    ensure_valid(validate_jozsa(circuit))?;
    let tol = Tolerances::for_scalar::<T>();
    check_exact_width(circuit.width, &tol)?;
    let mut oracle = |x, c| tree.answer(x, c);
    let r1 = circuit.r1_width;
    let mut branches = vec![(1.0, PureState::<T>::basis(Bits::zeros(circuit.input_width())))];
    let mut finals: BTreeMap<Bits, f64> = BTreeMap::new();
    for (bi, block) in circuit.blocks.iter().enumerate() {
        let last = bi + 1 == circuit.blocks.len();
        let mut next = Vec::new();
        for (p, state) in branches {
            let state = jozsa_quantum(state, &block.quantum, &tol, &mut oracle)?;
            for (outcome, q, post) in state.condition_on_low(r1) {
                let out = run_classical_tier(Bits::new(outcome, r1), &block.classical, &mut oracle)?;
                if last {
                    *finals.entry(out).or_insert(0.0) += p * q;
                } else {
                    next.push((p * q, post.overwrite_low(r1, out.value())));
                }
            }
            if next.len() > BRANCH_CAP {
                return Err(Error::BranchCap(BRANCH_CAP));
            }
        }
        branches = next;
    }
    Ok(OutputDistribution { probs: finals })
}

pub fn run_circuit<T: Scalar>(circuit: &Circuit, tree: &BlackBoxTree, seed: u64) -> Result<Bits> {
    match circuit {
        Circuit::Hybrid(h) => run_hybrid::<T>(h, tree, seed),
        Circuit::Jozsa(j) => run_jozsa::<T>(j, tree, seed),
    }
}

pub fn run_circuit_exact<T: Scalar>(circuit: &Circuit, tree: &BlackBoxTree) -> Result<OutputDistribution> {
    match circuit {
        Circuit::Hybrid(h) => run_hybrid_exact::<T>(h, tree),
        Circuit::Jozsa(j) => run_jozsa_exact::<T>(j, tree),
    }
}
