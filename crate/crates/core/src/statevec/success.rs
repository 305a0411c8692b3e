use rayon::prelude::*;

use super::exec::{run_circuit, run_circuit_exact};
use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::scalar::Scalar;
use crate::stats::Estimate;
use crate::tolerance::Tolerances;
use crate::welded_tree::BlackBoxTree;

/// Probability that `circuit` outputs the exit label, averaged over
/// `labelings` fresh labelings of `template`'s structure and coloring.
///
/// Each labeling contributes its exact success probability when the circuit
/// fits the exact executor, and one sampled run otherwise.
pub fn success_probability<T: Scalar>(
    circuit: &Circuit,
    template: &BlackBoxTree,
    labelings: usize,
    seed: u64,
) -> Result<Estimate> {
    let n = circuit.n();
    let exact = circuit.width() <= Tolerances::for_scalar::<T>().exact_width_cap;
    let per: Vec<f64> = (0..labelings)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let tree = template.relabel(derive_seed(seed, 2 * k as u64))?;
            let exit = tree.exit_label();
            if exact {
                match run_circuit_exact::<T>(circuit, &tree) {
                    Ok(d) => return Ok(d.label_prob(n, exit)),
                    Err(Error::BranchCap(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            let out = run_circuit::<T>(circuit, &tree, derive_seed(seed, 2 * k as u64 + 1))?;
            Ok(if out.label(n) == exit { 1.0 } else { 0.0 })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Estimate::from_samples(&per))
}
