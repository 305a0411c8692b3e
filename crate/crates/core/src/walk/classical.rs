use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rng::{derive_seed, rng_from_seed, uniform_u64};
use crate::stats::Estimate;
use crate::welded_tree::{BlackBoxTree, Label, Oracle, NUM_COLORS};

/// Random walk from the entrance that spends at most `budget` queries.
///
/// Each step asks for a uniformly random color at the current vertex and
/// moves along the edge if there is one. Succeeds as soon as an answer is
/// the exit label.
pub fn classical_walker(bbt: &BlackBoxTree, budget: u64, seed: u64) -> bool {
    let exit = bbt.exit_label();
    let invalid = bbt.invalid();
    let mut oracle = bbt.handle();
    let mut rng = rng_from_seed(seed);
    let mut at = Label::ENTRANCE;
    while oracle.queries() < budget {
        let c = uniform_u64(&mut rng, 1, NUM_COLORS as u64 + 1) as u8;
        let y = oracle.query(at, c);
        if y == exit {
            return true;
        }
        if y != invalid {
            at = y;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkerRate {
    pub n: u32,
    pub budget: u64,
    pub trials: u64,
    pub successes: u64,
    pub rate: Estimate,
}

/// Success frequency of the walker over `trials` independent trees and walks.
pub fn walker_success_rate(n: u32, budget: u64, trials: u64, seed: u64) -> Result<WalkerRate> {
    let wins = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let tree = BlackBoxTree::generate(n, derive_seed(s, 0))?;
            Ok(classical_walker(&tree, budget, derive_seed(s, 1)) as u64)
        })
        .collect::<Result<Vec<u64>>>()?;
    let successes = wins.iter().sum();
    Ok(WalkerRate {
        n,
        budget,
        trials,
        successes,
        rate: Estimate::bernoulli(successes, trials),
    })
}
