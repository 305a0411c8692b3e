use rand::Rng;

use super::config::BottleneckConfig;
use super::core::{bottleneck, Bottleneck, BottleneckCall};
use super::estimate::EstimatorContext;
use super::tape::SeedTape;
use crate::circuits::{ensure_valid, validate_hybrid, HybridCircuit, Tier, TierKind};
use crate::error::{Error, Result};
use crate::hybrid_sim::{KnownVertices, SimTranscript, Simulator, TierRecord};
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;
use crate::statevec::{Bits, ClassicalRegister, PureState};
use crate::welded_tree::{label_mask, BlackBoxTree, Oracle, OracleHandle};

/// Output of a bottleneck run.
#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckRun {
    pub output: Bits,
    pub known: KnownVertices,
    pub hist: KnownVertices,
    pub aborted: bool,
    /// Tier in which the run aborted.
    pub abort_tier: Option<usize>,
    pub transcript: SimTranscript,
    pub calls: Vec<BottleneckCall>,
    /// `|V_hist|` after the entrance query and after each completed tier.
    pub hist_sizes: Vec<usize>,
}

/// Tier output, or `None` on ABORT.
pub type TierOutcome = Option<(Bits, KnownVertices)>;

/// The bottleneck simulator's state between tiers.
pub struct BottleneckSimulator<'a, T: Scalar, O: Oracle> {
    circuit: &'a HybridCircuit,
    template: &'a BlackBoxTree,
    tape: SeedTape,
    config: &'a BottleneckConfig,
    sim: Simulator<'a, T, O>,
    hist: KnownVertices,
    calls: Vec<BottleneckCall>,
}

impl<'a, T: Scalar> BottleneckSimulator<'a, T, OracleHandle<'a>> {
    /// Instrumented against `tree`, starting with the entrance query.
    pub fn new(circuit: &'a HybridCircuit, tree: &'a BlackBoxTree, tape: SeedTape, config: &'a BottleneckConfig) -> Self {
        let sim = Simulator::<T>::new(tree);
        Self::from_simulator(circuit, tree, sim, tape, config)
    }

    /// Instrumented against `tree`, resuming from history `hist` without
    /// spending queries.
    pub fn with_history(
        circuit: &'a HybridCircuit,
        tree: &'a BlackBoxTree,
        hist: &KnownVertices,
        tape: SeedTape,
        config: &'a BottleneckConfig,
    ) -> Self {
        let sim = Simulator::<T>::with_known(tree, hist.clone());
        Self::from_simulator(circuit, tree, sim, tape, config)
    }
}

impl<'a, T: Scalar, O: Oracle> BottleneckSimulator<'a, T, O> {
    /// Uninstrumented run over `oracle`; `template` supplies the welding in
    /// labels-only sampling.
    pub fn over_oracle(
        circuit: &'a HybridCircuit,
        template: &'a BlackBoxTree,
        oracle: O,
        tape: SeedTape,
        config: &'a BottleneckConfig,
    ) -> Self {
        let sim = Simulator::<T, O>::from_oracle(oracle);
        Self::from_simulator(circuit, template, sim, tape, config)
    }

    fn from_simulator(
        circuit: &'a HybridCircuit,
        template: &'a BlackBoxTree,
        sim: Simulator<'a, T, O>,
        tape: SeedTape,
        config: &'a BottleneckConfig,
    ) -> Self {
        let hist = sim.known().clone();
        Self {
            circuit,
            template,
            tape,
            config,
            sim,
            hist,
            calls: Vec::new(),
        }
    }

    pub fn hist(&self) -> &KnownVertices {
        &self.hist
    }

    pub fn known(&self) -> &KnownVertices {
        self.sim.known()
    }

    pub fn simulator(&self) -> &Simulator<'a, T, O> {
        &self.sim
    }

    pub fn calls(&self) -> &[BottleneckCall] {
        &self.calls
    }

    pub fn tier_records(&self) -> &[TierRecord] {
        self.sim.tier_records()
    }

    fn context(&self, j: usize, x: Bits) -> EstimatorContext<'_> {
        EstimatorContext {
            circuit: self.circuit,
            tiers: j,
            target: x,
            tape: self.tape.prefix(j),
            config: self.config,
            template: self.template,
        }
    }

    fn call(&mut self, j: usize, x: Bits, current: &KnownVertices, slot: usize) -> Result<Option<KnownVertices>> {
        let (out, call) = bottleneck(&self.context(j, x), current, &self.hist, j, slot)?;
        self.calls.push(call);
        Ok(match out {
            Bottleneck::Known(v) => Some(v),
            Bottleneck::Abort => None,
        })
    }

    /// Tier `j` of the circuit on input `x`: a bottleneck call before the
    /// first layer and after every layer, the history merged in between,
    /// and a measurement seeded from the tape at the end.
    pub fn run_tier(&mut self, j: usize, x: Bits) -> Result<TierOutcome> {
        self.run_tier_traced(j, x, None)
    }

    /// As `run_tier`, also pushing the state after every quantum layer.
    pub fn run_tier_traced(&mut self, j: usize, x: Bits, mut trace: Option<&mut Vec<PureState<T>>>) -> Result<TierOutcome> {
        let circuit = self.circuit;
        let tier: &Tier = circuit
            .tiers
            .get(j)
            .ok_or_else(|| Error::InvalidCircuit(format!("no tier {j}")))?;
        let Some(v0) = self.call(j, x, &KnownVertices::new(circuit.n), 0)? else { return Ok(None) };
        self.sim.set_known(v0);
        let start = self.sim.begin_tier();
        let out = match tier.kind {
            TierKind::Quantum => {
                let mut state = PureState::<T>::basis(x.resized(tier.width_in));
                for (l, layer) in tier.layers.iter().enumerate() {
                    state = self.sim.quantum_layer(layer, &state)?;
                    if let Some(t) = trace.as_deref_mut() {
                        t.push(state.clone());
                    }
                    if !self.after_layer(j, x, l + 1)? {
                        return Ok(None);
                    }
                }
                state.measure_live(&mut rng_from_seed(self.tape.measurement(j)))
            }
            TierKind::Classical => {
                let mut reg = ClassicalRegister::new(x.resized(tier.width_in));
                for (l, layer) in tier.layers.iter().enumerate() {
                    reg = self.sim.classical_layer(layer, reg)?;
                    if !self.after_layer(j, x, l + 1)? {
                        return Ok(None);
                    }
                }
                reg.live_bits()
            }
        };
        self.sim.end_tier(tier, start);
        self.hist.merge(self.sim.known());
        Ok(Some((out, self.sim.known().clone())))
    }

    fn after_layer(&mut self, j: usize, x: Bits, slot: usize) -> Result<bool> {
        let temp = self.sim.known().clone();
        self.hist.merge(&temp);
        match self.call(j, x, &temp, slot)? {
            Some(v) => {
                self.sim.set_known(v);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Runs tiers `0..tiers` from input `0^n`; on ABORT the output is a
    /// uniformly random `2n`-bit label.
    pub fn run(mut self, tiers: usize) -> Result<BottleneckRun> {
        let mut x = Bits::zeros(self.circuit.input_width());
        let mut hist_sizes = vec![self.hist.size()];
        let mut abort_tier = None;
        for j in 0..tiers {
            match self.run_tier(j, x)? {
                Some((y, _)) => {
                    x = y;
                    hist_sizes.push(self.hist.size());
                }
                None => {
                    abort_tier = Some(j);
                    let n = self.circuit.n;
                    let mut rng = rng_from_seed(self.tape.guess(j));
                    x = Bits::new(rng.random_range(0..=label_mask(n)) as u128, 2 * n as usize);
                    break;
                }
            }
        }
        let mut transcript = self.sim.transcript(x);
        transcript.aborted = abort_tier.is_some();
        Ok(BottleneckRun {
            output: x,
            known: self.sim.known().clone(),
            hist: self.hist,
            aborted: abort_tier.is_some(),
            abort_tier,
            transcript,
            calls: self.calls,
            hist_sizes,
        })
    }
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

pub(crate) fn bottleneck_run<T: Scalar, O: Oracle>(
    circuit: &HybridCircuit,
    template: &BlackBoxTree,
    oracle: O,
    tiers: usize,
    tape: SeedTape,
    config: &BottleneckConfig,
) -> Result<BottleneckRun> {
    check_prefix(circuit, tiers)?;
    BottleneckSimulator::<T, O>::over_oracle(circuit, template, oracle, tape, config).run(tiers)
}

/// Simulates the first `tiers` tiers of `circuit` on `tree` with the
/// bottleneck, drawing all randomness from the tape rooted at `seed`.
pub fn bottleneck_wrapper<T: Scalar>(
    circuit: &HybridCircuit,
    tree: &BlackBoxTree,
    tiers: usize,
    seed: u64,
    config: &BottleneckConfig,
) -> Result<BottleneckRun> {
    check_prefix(circuit, tiers)?;
    let tape = SeedTape::for_circuit(circuit, seed);
    BottleneckSimulator::<T, _>::new(circuit, tree, tape, config).run(tiers)
}

/// Tier `j` alone, from input `x` and history `hist`.
///
/// Returns the tier output with the final and history dictionaries, or
/// `None` on ABORT, plus the calls made.
#[allow(clippy::type_complexity)]
pub fn bottleneck_tier_sim<T: Scalar>(
    circuit: &HybridCircuit,
    j: usize,
    x: Bits,
    hist: &KnownVertices,
    tree: &BlackBoxTree,
    seed: u64,
    config: &BottleneckConfig,
) -> Result<(Option<(Bits, KnownVertices, KnownVertices)>, Vec<BottleneckCall>)> {
    ensure_valid(validate_hybrid(circuit))?;
    let tape = SeedTape::for_circuit(circuit, seed);
    let mut b = BottleneckSimulator::<T, _>::with_history(circuit, tree, hist, tape, config);
    let out = b.run_tier(j, x)?;
    let hist = b.hist.clone();
    Ok((out.map(|(y, v)| (y, v, hist)), b.calls))
}
