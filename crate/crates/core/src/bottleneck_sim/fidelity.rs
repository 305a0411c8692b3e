use serde::{Deserialize, Serialize};

use super::config::BottleneckConfig;
use super::tape::SeedTape;
use super::wrapper::BottleneckSimulator;
use crate::circuits::{ensure_valid, validate_hybrid, HybridCircuit, TierKind};
use crate::error::{Error, Result};
use crate::hybrid_sim::KnownVertices;
use crate::scalar::Scalar;
use crate::statevec::{apply_layer, Bits, PureState};
use crate::welded_tree::BlackBoxTree;

/// Distances after one quantum layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerGap {
    pub layer: usize,
    /// `|| psi' - L^T phi ||` for this layer's query step alone.
    pub local: f64,
    /// Distance from the true-oracle state after the same layers.
    pub global: f64,
    pub outlier_mass: f64,
    pub clean: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityGapReport {
    pub tier: usize,
    pub aborted: bool,
    pub layers: Vec<LayerGap>,
}

impl FidelityGapReport {
    /// Whether every global distance is within the running sum of local
    /// ones, up to `tol`.
    pub fn triangle_holds(&self, tol: f64) -> bool {
        let mut sum = 0.0;
        self.layers.iter().all(|g| {
            sum += g.local;
            g.global <= sum + tol
        })
    }

    pub fn max_global(&self) -> f64 {
        self.layers.iter().map(|g| g.global).fold(0.0, f64::max)
    }
}

fn distance<T: Scalar>(a: &PureState<T>, b: &PureState<T>) -> f64 {
    let d = a.norm_sqr().to_f64_lossy() + b.norm_sqr().to_f64_lossy() - 2.0 * a.inner(b).re.to_f64_lossy();
    d.max(0.0).sqrt()
}

/// Runs quantum tier `j` from `x` and history `hist` through the bottleneck
/// simulator alongside the true-oracle evolution, reporting per-layer
/// distances. An ABORT ends the report early.
pub fn fidelity_gap_check<T: Scalar>(
    circuit: &HybridCircuit,
    tree: &BlackBoxTree,
    j: usize,
    x: Bits,
    hist: &KnownVertices,
    seed: u64,
    config: &BottleneckConfig,
) -> Result<FidelityGapReport> {
    ensure_valid(validate_hybrid(circuit))?;
    let tier = circuit
        .tiers
        .get(j)
        .ok_or_else(|| Error::InvalidCircuit(format!("no tier {j}")))?;
    if tier.kind != TierKind::Quantum {
        return Err(Error::TierKind("expected a quantum tier".into()));
    }
    let tape = SeedTape::for_circuit(circuit, seed);
    let mut b = BottleneckSimulator::<T, _>::with_history(circuit, tree, hist, tape, config);
    let mut trace = Vec::new();
    let out = b.run_tier_traced(j, x, Some(&mut trace))?;
    let records = b.simulator().records();
    let mut truth = PureState::<T>::basis(x.resized(tier.width_in));
    let mut layers = Vec::with_capacity(trace.len());
    for (l, (sim, layer)) in trace.iter().zip(&tier.layers).enumerate() {
        truth = apply_layer(&truth, layer, tree)?;
        let r = &records[l];
        let local = (2.0 * (1.0 - r.fidelity)).max(0.0).sqrt();
        layers.push(LayerGap {
            layer: l + 1,
            local,
            global: distance(sim, &truth),
            outlier_mass: r.outlier_mass,
            clean: r.clean,
        });
    }
    Ok(FidelityGapReport {
        tier: j,
        aborted: out.is_none(),
        layers,
    })
}
