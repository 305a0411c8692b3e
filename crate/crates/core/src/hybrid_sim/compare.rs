use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{few_tier_exact, jozsa_exact, ExactSimulation};
use crate::circuits::Circuit;
use crate::error::Result;
use crate::rng::derive_seed;
use crate::scalar::Scalar;
use crate::stats::Estimate;
use crate::statevec::run_circuit_exact;
use crate::welded_tree::BlackBoxTree;

/// Simulator against exact reference over random labelings.
///
/// `tv` is the total variation distance (half the 1-norm) between the
/// simulator's and the reference's output distributions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Comparison {
    pub labelings: usize,
    pub tv: Estimate,
    pub max_tv: f64,
    pub min_fidelity: f64,
    pub max_outlier_mass: f64,
    pub max_identity_gap: f64,
    pub max_queries: u64,
    pub mean_queries: Estimate,
}

/// Exact simulator distribution for either circuit kind.
pub fn simulate_exact<T: Scalar>(circuit: &Circuit, tree: &BlackBoxTree) -> Result<ExactSimulation> {
    match circuit {
        Circuit::Hybrid(h) => few_tier_exact::<T>(h, tree),
        Circuit::Jozsa(j) => jozsa_exact::<T>(j, tree),
    }
}

/// Compares on `labelings` relabelings of `template`'s structure; labeling
/// `k` uses seed `derive_seed(seed, k)`.
pub fn compare_to_reference<T: Scalar>(
    circuit: &Circuit,
    template: &BlackBoxTree,
    labelings: usize,
    seed: u64,
) -> Result<Comparison> {
    let runs: Vec<(f64, ExactSimulation)> = (0..labelings)
        .into_par_iter()
        .map(|k| {
            let tree = template.relabel(derive_seed(seed, k as u64))?;
            let sim = simulate_exact::<T>(circuit, &tree)?;
            let reference = run_circuit_exact::<T>(circuit, &tree)?;
            Ok((sim.distribution.total_variation(&reference), sim))
        })
        .collect::<Result<_>>()?;
    let tvs: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let qs: Vec<f64> = runs.iter().map(|r| r.1.stats.mean_queries).collect();
    Ok(Comparison {
        labelings,
        tv: Estimate::from_samples(&tvs),
        max_tv: tvs.iter().copied().fold(0.0, f64::max),
        min_fidelity: runs.iter().map(|r| r.1.stats.min_fidelity).fold(1.0, f64::min),
        max_outlier_mass: runs.iter().map(|r| r.1.stats.max_outlier_mass).fold(0.0, f64::max),
        max_identity_gap: runs.iter().map(|r| r.1.stats.max_identity_gap).fold(0.0, f64::max),
        max_queries: runs.iter().map(|r| r.1.stats.max_queries).max().unwrap_or(0),
        mean_queries: Estimate::from_samples(&qs),
    })
}
