use std::collections::BTreeMap;

use super::known::KnownVertices;
use super::sim::Simulator;
use super::transcript::{LayerRecord, TierRecord};
use crate::circuits::{ensure_valid, validate_hybrid, validate_jozsa, HybridCircuit, JozsaCircuit, TierKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevec::{Bits, OutputDistribution, PureState, BRANCH_CAP};
use crate::tolerance::Tolerances;
use crate::welded_tree::BlackBoxTree;

/// Worst-case figures over every measurement branch of a simulator run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BranchStats {
    pub branches: usize,
    pub layers: usize,
    pub max_queries: u64,
    pub mean_queries: f64,
    pub max_outlier_mass: f64,
    pub min_fidelity: f64,
    /// Largest fidelity-identity gap over clean layers.
    pub max_identity_gap: f64,
    pub clean_layers: usize,
    /// Largest `|V'| / |V|` over quantum layers.
    pub max_growth: f64,
    /// Largest tier query count relative to its ceiling.
    pub max_tier_ratio: f64,
    pub tier_violations: usize,
}

impl BranchStats {
    fn new() -> Self {
        Self {
            min_fidelity: 1.0,
            ..Self::default()
        }
    }

    fn absorb_layers(&mut self, layers: &[LayerRecord]) {
        for r in layers {
            self.layers += 1;
            self.max_outlier_mass = self.max_outlier_mass.max(r.outlier_mass);
            self.min_fidelity = self.min_fidelity.min(r.fidelity);
            if r.clean {
                self.clean_layers += 1;
                self.max_identity_gap = self.max_identity_gap.max(r.identity_gap());
            }
            if r.quantum && r.known_before > 0 {
                self.max_growth = self.max_growth.max(r.known_after as f64 / r.known_before as f64);
            }
        }
    }

    fn absorb_tiers(&mut self, tiers: &[TierRecord]) {
        for t in tiers {
            let c = t.ceiling();
            if c > 0 {
                self.max_tier_ratio = self.max_tier_ratio.max(t.vertex_queries as f64 / c as f64);
            }
            if !t.within_ceiling() {
                self.tier_violations += 1;
            }
        }
    }
}

/// The simulator's exact output distribution, with branch statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSimulation {
    pub distribution: OutputDistribution,
    pub stats: BranchStats,
}

fn check_width(width: usize, tol: &Tolerances) -> Result<()> {
    if width > tol.exact_width_cap {
        return Err(Error::WidthCap {
            width,
            cap: tol.exact_width_cap,
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Branch {
    p: f64,
    queries: u64,
}

/// Exact output distribution of the few-tier simulator, branching over
/// every tier measurement. Each branch keeps its own dictionary.
pub fn few_tier_exact<T: Scalar>(circuit: &HybridCircuit, tree: &BlackBoxTree) -> Result<ExactSimulation> {
    ensure_valid(validate_hybrid(circuit))?;
    let tol = Tolerances::for_scalar::<T>();
    check_width(circuit.width, &tol)?;
    let mut stats = BranchStats::new();
    let start = Simulator::<T>::new(tree);
    let mut branches: BTreeMap<(Bits, KnownVertices), Branch> = BTreeMap::new();
    branches.insert(
        (Bits::zeros(circuit.input_width()), start.known().clone()),
        Branch { p: 1.0, queries: start.queries() },
    );
    for tier in &circuit.tiers {
        let mut next: BTreeMap<(Bits, KnownVertices), Branch> = BTreeMap::new();
        for ((x, known), b) in branches {
            let mut sim = Simulator::<T>::with_known(tree, known);
            let outcomes: Vec<(Bits, f64)> = match tier.kind {
                TierKind::Classical => vec![(sim.classical_tier(tier, x)?, 1.0)],
                TierKind::Quantum => {
                    let state = sim.quantum_tier_state(tier, x)?;
                    let live = state.live();
                    state.live_distribution().into_iter().map(|(k, p)| (Bits::new(k, live), p)).collect()
                }
            };
            stats.absorb_layers(sim.records());
            stats.absorb_tiers(sim.tier_records());
            let q = b.queries + sim.queries();
            for (y, p) in outcomes {
                if p == 0.0 {
                    continue;
                }
                let e = next.entry((y, sim.known().clone())).or_insert(Branch { p: 0.0, queries: 0 });
                e.p += b.p * p;
                e.queries = e.queries.max(q);
            }
            if next.len() > BRANCH_CAP {
                return Err(Error::BranchCap(BRANCH_CAP));
            }
        }
        branches = next;
    }
    let mut dist = OutputDistribution::default();
    stats.branches = branches.len();
    for ((x, _), b) in &branches {
        dist.add(*x, b.p);
        stats.max_queries = stats.max_queries.max(b.queries);
        stats.mean_queries += b.p * b.queries as f64;
    }
    Ok(ExactSimulation { distribution: dist, stats })
}

/// Exact output distribution of the Jozsa simulator, branching over every
/// `R1` measurement.
pub fn jozsa_exact<T: Scalar>(circuit: &JozsaCircuit, tree: &BlackBoxTree) -> Result<ExactSimulation> {
    ensure_valid(validate_jozsa(circuit))?;
    let tol = Tolerances::for_scalar::<T>();
    check_width(circuit.width, &tol)?;
    let r1 = circuit.r1_width;
    let mut stats = BranchStats::new();
    let start = Simulator::<T>::new(tree);
    let mut branches = vec![(
        Branch { p: 1.0, queries: start.queries() },
        PureState::<T>::basis(Bits::zeros(circuit.input_width())),
        start.known().clone(),
    )];
    let mut dist = OutputDistribution::default();
    for (bi, block) in circuit.blocks.iter().enumerate() {
        let last = bi + 1 == circuit.blocks.len();
        let mut next = Vec::new();
        for (b, state, known) in branches {
            let mut sim = Simulator::<T>::with_known(tree, known);
            let state = sim.quantum_layers(&block.quantum, state)?;
            stats.absorb_layers(sim.records());
            let after_q = sim.queries();
            let known_q = sim.known().clone();
            for (outcome, p, post) in state.condition_on_low(r1) {
                let mut csim = Simulator::<T>::with_known(tree, known_q.clone());
                let out = csim.classical_tier(&block.classical, Bits::new(outcome, r1))?;
                stats.absorb_layers(csim.records());
                let nb = Branch {
                    p: b.p * p,
                    queries: b.queries + after_q + csim.queries(),
                };
                if last {
                    dist.add(out, nb.p);
                    stats.branches += 1;
                    stats.max_queries = stats.max_queries.max(nb.queries);
                    stats.mean_queries += nb.p * nb.queries as f64;
                } else {
                    next.push((nb, post.overwrite_low(r1, out.value()), csim.into_known()));
                }
            }
            if next.len() > BRANCH_CAP {
                return Err(Error::BranchCap(BRANCH_CAP));
            }
        }
        branches = next;
    }
    Ok(ExactSimulation { distribution: dist, stats })
}
