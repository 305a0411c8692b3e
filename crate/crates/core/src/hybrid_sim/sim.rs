use std::collections::BTreeMap;
use std::marker::PhantomData;

use num_complex::Complex;
use rand::RngCore;

use super::known::KnownVertices;
use super::oracle_sim::{query_gates, LayerOracle};
use super::transcript::{LayerRecord, SimTranscript, TierRecord};
use crate::circuits::{Layer, QueryWires, Tier, TierKind};
use crate::error::{Error, Result};
use crate::scalar::{norm_sqr, Amplitude, Scalar};
use crate::statevec::{
    apply_gate_to_basis, apply_layer_classical, apply_layer_with, read_register, Bits, ClassicalRegister, PureState,
};
use crate::tolerance::Tolerances;
use crate::welded_tree::{BlackBoxTree, ColorCode, Label, Oracle, OracleHandle};

fn no_queries(_: Label, _: ColorCode) -> Label {
    unreachable!("query gate in a non-query layer")
}

/// Whether each query's y-register is constant over `keys`.
fn clean_queries(queries: &[&QueryWires], keys: impl Iterator<Item = u128> + Clone) -> bool {
    queries.iter().all(|q| {
        let mut it = keys.clone().map(|k| read_register(k, &q.y));
        match it.next() {
            Some(first) => it.all(|y| y == first),
            None => true,
        }
    })
}

/// The few-tier simulator's mutable state: the dictionary of known
/// vertices, a query counter and the transcript so far.
///
/// Layers are only instrumented against the real oracle when a tree is
/// attached; runs over a bare `Oracle` record per-tier counts only.
#[derive(Debug, Clone)]
pub struct Simulator<'a, T: Scalar = f64, O: Oracle = OracleHandle<'a>> {
    truth: Option<&'a BlackBoxTree>,
    oracle: O,
    known: KnownVertices,
    tol: Tolerances,
    vertex_queries: u64,
    records: Vec<LayerRecord>,
    tiers: Vec<TierRecord>,
    tier: usize,
    _scalar: PhantomData<T>,
}

impl<'a, T: Scalar> Simulator<'a, T> {
    /// Starts from the entrance's answers, spending one vertex query.
    pub fn new(tree: &'a BlackBoxTree) -> Self {
        let mut s = Simulator::from_oracle(tree.handle());
        s.truth = Some(tree);
        s
    }

    /// Starts from a given dictionary without spending queries.
    pub fn with_known(tree: &'a BlackBoxTree, known: KnownVertices) -> Self {
        let mut s = Simulator::from_oracle_known(tree.handle(), known);
        s.truth = Some(tree);
        s
    }
}

impl<'a, T: Scalar, O: Oracle> Simulator<'a, T, O> {
    /// Uninstrumented run over `oracle`, starting with the entrance query.
    pub fn from_oracle(mut oracle: O) -> Self {
        let known = KnownVertices::entrance(&mut oracle);
        let mut s = Self::from_oracle_known(oracle, known);
        s.vertex_queries = 1;
        s
    }

    pub fn from_oracle_known(oracle: O, known: KnownVertices) -> Self {
        Self {
            truth: None,
            oracle,
            known,
            tol: Tolerances::for_scalar::<T>(),
            vertex_queries: 0,
            records: Vec::new(),
            tiers: Vec::new(),
            tier: 0,
            _scalar: PhantomData,
        }
    }

    /// The tree used for instrumentation, if any.
    pub fn tree(&self) -> Option<&'a BlackBoxTree> {
        self.truth
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn known(&self) -> &KnownVertices {
        &self.known
    }

    pub fn set_known(&mut self, known: KnownVertices) {
        self.known = known;
    }

    pub fn into_known(self) -> KnownVertices {
        self.known
    }

    /// Vertex queries so far.
    pub fn queries(&self) -> u64 {
        self.vertex_queries
    }

    pub fn oracle_calls(&self) -> u64 {
        self.oracle.queries()
    }

    pub fn records(&self) -> &[LayerRecord] {
        &self.records
    }

    pub fn tier_records(&self) -> &[TierRecord] {
        &self.tiers
    }

    pub fn transcript(&self, output: Bits) -> SimTranscript {
        SimTranscript {
            queries: self.vertex_queries,
            per_layer: self.records.clone(),
            output,
            aborted: false,
            oracle_calls: self.oracle.queries(),
            tiers: self.tiers.clone(),
        }
    }


    /// One quantum layer: non-query gates exactly, then the query gates
    /// through the dictionary. Also records outlier mass and fidelity
    /// against the real oracle.
    pub fn quantum_layer(&mut self, layer: &Layer, state: &PureState<T>) -> Result<PureState<T>> {
        let (lg, lt) = layer.split();
        let phi = apply_layer_with(state, &lg, &self.tol, &mut no_queries)?;
        let queries = query_gates(&lt)?;
        let known_before = self.known.size();
        let mut lo = LayerOracle::new(&self.known);
        let mut psi: BTreeMap<u128, Amplitude<T>> = BTreeMap::new();
        let mut pairs = Vec::new();
        let mut outlier = T::zero();
        for (z, a) in phi.iter() {
            let s = lo.apply(z, &queries, &mut self.oracle);
            if let Some(tree) = self.truth {
                let t = lt.gates.iter().fold(z, |k, g| apply_gate_to_basis(k, g, &mut |x, c| tree.answer(x, c)).unwrap());
                if s != t {
                    outlier = outlier + norm_sqr(a);
                }
                pairs.push((t, a));
            }
            psi.insert(s, a);
        }
        self.vertex_queries += lo.vertex_queries;
        let branches = lo.branches;
        let vq = lo.vertex_queries;
        self.known = lo.temp;
        if self.truth.is_some() {
            let mut fid: Amplitude<T> = Complex::default();
            for (t, a) in pairs {
                if let Some(b) = psi.get(&t) {
                    fid += b.conj() * a;
                }
            }
            let clean = queries.is_empty() || clean_queries(&queries, phi.amps().keys().copied());
            self.records.push(LayerRecord {
                outlier_mass: outlier.to_f64_lossy(),
                fidelity: fid.re.to_f64_lossy(),
                fidelity_im: fid.im.to_f64_lossy(),
                tier: self.tier,
                layer: self.records.iter().filter(|r| r.tier == self.tier).count(),
                quantum: true,
                clean,
                vertex_queries: vq,
                known_before,
                known_after: self.known.size(),
                branches,
            });
        }
        let (w, l) = (phi.width(), phi.live());
        Ok(PureState::from_parts(w, l, psi))
    }

    /// One classical layer on a basis state.
    pub fn classical_layer(&mut self, layer: &Layer, reg: ClassicalRegister) -> Result<ClassicalRegister> {
        let (lg, lt) = layer.split();
        let u = apply_layer_classical(reg, &lg, &mut no_queries)?;
        let queries = query_gates(&lt)?;
        let known_before = self.known.size();
        let mut lo = LayerOracle::new(&self.known);
        let s = lo.apply(u.key, &queries, &mut self.oracle);
        self.vertex_queries += lo.vertex_queries;
        let branches = lo.branches;
        let vq = lo.vertex_queries;
        self.known = lo.temp;
        if let Some(tree) = self.truth {
            let t = lt.gates.iter().fold(u.key, |k, g| apply_gate_to_basis(k, g, &mut |x, c| tree.answer(x, c)).unwrap());
            let outlier = if s == t { 0.0 } else { 1.0 };
            self.records.push(LayerRecord {
                outlier_mass: outlier,
                fidelity: 1.0 - outlier,
                fidelity_im: 0.0,
                tier: self.tier,
                layer: self.records.iter().filter(|r| r.tier == self.tier).count(),
                quantum: false,
                clean: true,
                vertex_queries: vq,
                known_before,
                known_after: self.known.size(),
                branches,
            });
        }
        Ok(ClassicalRegister { key: s, ..u })
    }

    pub(crate) fn begin_tier(&self) -> (usize, u64) {
        (self.known.size(), self.vertex_queries)
    }

    pub(crate) fn end_tier(&mut self, tier: &Tier, start: (usize, u64)) {
        self.tiers.push(TierRecord {
            tier: self.tier,
            kind: tier.kind,
            depth: tier.depth(),
            width: tier.max_width(),
            known_before: start.0,
            vertex_queries: self.vertex_queries - start.1,
        });
        self.tier += 1;
    }

    /// Runs the layers of a quantum tier on `state` without measuring.
    /// `state` is a full basis-state input or, for Jozsa circuits, the
    /// carried-over state.
    pub fn quantum_layers(&mut self, tier: &Tier, state: PureState<T>) -> Result<PureState<T>> {
        if tier.kind != TierKind::Quantum {
            return Err(Error::TierKind("expected a quantum tier".into()));
        }
        let start = self.begin_tier();
        let mut state = state;
        for layer in &tier.layers {
            state = self.quantum_layer(layer, &state)?;
        }
        self.end_tier(tier, start);
        Ok(state)
    }

    /// A quantum tier from classical input `x`, before its measurement.
    pub fn quantum_tier_state(&mut self, tier: &Tier, x: Bits) -> Result<PureState<T>> {
        self.quantum_layers(tier, PureState::basis(x.resized(tier.width_in)))
    }

    /// A quantum tier followed by its measurement.
    pub fn quantum_tier<R: RngCore>(&mut self, tier: &Tier, x: Bits, rng: &mut R) -> Result<Bits> {
        let state = self.quantum_tier_state(tier, x)?;
        Ok(state.measure_live(rng))
    }

    /// A classical tier, evaluated layer by layer.
    pub fn classical_tier(&mut self, tier: &Tier, x: Bits) -> Result<Bits> {
        if tier.kind != TierKind::Classical {
            return Err(Error::TierKind("expected a classical tier".into()));
        }
        let start = self.begin_tier();
        let mut reg = ClassicalRegister::new(x.resized(tier.width_in));
        for layer in &tier.layers {
            reg = self.classical_layer(layer, reg)?;
        }
        self.end_tier(tier, start);
        Ok(reg.live_bits())
    }

    pub fn run_tier<R: RngCore>(&mut self, tier: &Tier, x: Bits, rng: &mut R) -> Result<Bits> {
        match tier.kind {
            TierKind::Quantum => self.quantum_tier(tier, x, rng),
            TierKind::Classical => self.classical_tier(tier, x),
        }
    }
}
