use super::known::KnownVertices;
use super::sim::Simulator;
use super::transcript::{LayerRecord, SimTranscript};
use crate::circuits::{ensure_valid, validate_hybrid, validate_jozsa, HybridCircuit, JozsaCircuit, Layer, Tier};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::scalar::Scalar;
use crate::statevec::{pick, Bits, PureState};
use crate::welded_tree::{BlackBoxTree, Oracle};

/// Output, final dictionary and transcript of one simulator run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRun {
    pub output: Bits,
    pub known: KnownVertices,
    pub transcript: SimTranscript,
}

fn check_prefix(circuit: &HybridCircuit, tiers: usize) -> Result<()> {
    ensure_valid(validate_hybrid(circuit))?;
    if tiers > circuit.tiers.len() {
        return Err(Error::InvalidCircuit(format!(
            "asked for {tiers} tiers of a {}-tier circuit",
            circuit.tiers.len()
        )));
    }
    Ok(())
}

/// Seed of tier `j`'s measurement; tier `j` reads nothing else.
pub fn tier_seed(seed: u64, j: usize) -> u64 {
    derive_seed(seed, j as u64)
}

/// Simulates the first `tiers` tiers of `circuit`, starting from the
/// entrance's answers and input `0^n`.
pub fn few_tier_wrapper<T: Scalar>(circuit: &HybridCircuit, tree: &BlackBoxTree, tiers: usize, seed: u64) -> Result<SimRun> {
    check_prefix(circuit, tiers)?;
    let mut sim = Simulator::<T>::new(tree);
    let mut x = Bits::zeros(circuit.input_width());
    for (j, tier) in circuit.tiers[..tiers].iter().enumerate() {
        x = sim.run_tier(tier, x, &mut rng_from_seed(tier_seed(seed, j)))?;
    }
    let transcript = sim.transcript(x);
    Ok(SimRun {
        output: x,
        known: sim.into_known(),
        transcript,
    })
}

/// Output of the first `tiers` tiers simulated over a bare oracle, without
/// instrumentation. Same draws as `few_tier_wrapper`.
pub fn few_tier_output<T: Scalar, O: Oracle>(circuit: &HybridCircuit, oracle: O, tiers: usize, seed: u64) -> Result<Bits> {
    check_prefix(circuit, tiers)?;
    let mut sim = Simulator::<T, O>::from_oracle(oracle);
    let mut x = Bits::zeros(circuit.input_width());
    for (j, tier) in circuit.tiers[..tiers].iter().enumerate() {
        x = sim.run_tier(tier, x, &mut rng_from_seed(tier_seed(seed, j)))?;
    }
    Ok(x)
}

/// Simulates a Jozsa circuit: quantum layers through the dictionary,
/// `R1` measured after each quantum tier and fed to the classical tier,
/// `R2` carried over.
pub fn jozsa_wrapper<T: Scalar>(circuit: &JozsaCircuit, tree: &BlackBoxTree, seed: u64) -> Result<SimRun> {
    ensure_valid(validate_jozsa(circuit))?;
    let mut rng = rng_from_seed(seed);
    let mut sim = Simulator::<T>::new(tree);
    let r1 = circuit.r1_width;
    let mut state = PureState::<T>::basis(Bits::zeros(circuit.input_width()));
    let mut out = Bits::zeros(r1);
    for block in &circuit.blocks {
        let (o, next) = jozsa_block(&mut sim, &block.quantum, &block.classical, r1, state, &mut rng)?;
        out = o;
        state = next;
    }
    let transcript = sim.transcript(out);
    Ok(SimRun {
        output: out,
        known: sim.into_known(),
        transcript,
    })
}

fn jozsa_block<T: Scalar, R: rand::RngCore>(
    sim: &mut Simulator<'_, T>,
    quantum: &Tier,
    classical: &Tier,
    r1: usize,
    state: PureState<T>,
    rng: &mut R,
) -> Result<(Bits, PureState<T>)> {
    let state = sim.quantum_layers(quantum, state)?;
    let mut parts = state.condition_on_low(r1);
    let k = pick(parts.iter().map(|p| p.1), rng);
    let (outcome, _, post) = parts.swap_remove(k);
    let out = sim.classical_tier(classical, Bits::new(outcome, r1))?;
    Ok((out, post.overwrite_low(r1, out.value())))
}

/// One quantum layer through the dictionary `known`.
pub fn quantum_layer_sim<T: Scalar>(
    layer: &Layer,
    state: &PureState<T>,
    known: &KnownVertices,
    tree: &BlackBoxTree,
) -> Result<(PureState<T>, KnownVertices, LayerRecord)> {
    let mut sim = Simulator::<T>::with_known(tree, known.clone());
    let out = sim.quantum_layer(layer, state)?;
    let rec = sim.records()[0].clone();
    Ok((out, sim.into_known(), rec))
}

/// A quantum tier from `x` through `known`, with its measurement.
pub fn quantum_tier_sim<T: Scalar>(
    tier: &Tier,
    x: Bits,
    known: &KnownVertices,
    tree: &BlackBoxTree,
    seed: u64,
) -> Result<(Bits, KnownVertices, u64)> {
    let mut sim = Simulator::<T>::with_known(tree, known.clone());
    let out = sim.quantum_tier(tier, x, &mut rng_from_seed(seed))?;
    let q = sim.queries();
    Ok((out, sim.into_known(), q))
}

/// A classical tier from `x` through `known`.
pub fn classical_tier_sim(tier: &Tier, x: Bits, known: &KnownVertices, tree: &BlackBoxTree) -> Result<(Bits, KnownVertices, u64)> {
    let mut sim = Simulator::<f64>::with_known(tree, known.clone());
    let out = sim.classical_tier(tier, x)?;
    let q = sim.queries();
    Ok((out, sim.into_known(), q))
}

/// `4^{eta (d+1)} g d` with `d` the deepest tier, saturating.
pub fn few_tier_query_ceiling(circuit: &HybridCircuit) -> u128 {
    let d = circuit.tiers.iter().map(Tier::depth).max().unwrap_or(0) as u128;
    let e = (circuit.tiers.len() as u128 * (d + 1)).min(63) as u32;
    4u128.saturating_pow(e).saturating_mul(circuit.width as u128 * d)
}

/// `4^D + c g`, with `D` the summed quantum depth and `c` the deepest
/// classical block.
pub fn jozsa_query_ceiling(circuit: &JozsaCircuit) -> u128 {
    let d: usize = circuit.blocks.iter().map(|b| b.quantum.depth()).sum();
    let c = circuit.blocks.iter().map(|b| b.classical.depth()).max().unwrap_or(0);
    4u128.saturating_pow(d.min(63) as u32).saturating_add((c * circuit.width) as u128)
}
