use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::json;
use welded_core::rng::{derive_seed, rng_from_seed, uniform_u64};
use welded_core::stats::{binomial_sigma, Estimate};
use welded_core::welded_tree::{label_mask, BlackBoxTree, Label, Oracle, NUM_COLORS};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::report::{Attachments, Check, Report};

/// `h (2^{n+2} - 2) / 2^{2n}`.
pub fn discovery_bound(n: u32, h: u32) -> f64 {
    h as f64 * ((1u64 << (n + 2)) - 2) as f64 / (1u64 << (2 * n)) as f64
}

/// One adversary with `h` queries. Even-numbered queries probe a string it
/// has not seen returned or probed before; odd-numbered ones step a random
/// walk from the entrance. It wins if a probed string is a valid label.
pub fn discovery_trial(tree: &BlackBoxTree, h: u32, seed: u64) -> bool {
    let n = tree.height();
    let mut rng = rng_from_seed(seed);
    let mut oracle = tree.handle();
    let mut seen: BTreeSet<Label> = [Label::ENTRANCE].into();
    let mut at = Label::ENTRANCE;
    let color = |rng: &mut _| uniform_u64(rng, 1, NUM_COLORS as u64 + 1) as u8;
    for i in 0..h {
        if i % 2 == 0 {
            let x = loop {
                let x = Label(uniform_u64(&mut rng, 0, label_mask(n)));
                if !seen.contains(&x) {
                    break x;
                }
            };
            let c = color(&mut rng);
            oracle.query(x, c);
            if tree.is_valid_label(x) {
                return true;
            }
            seen.insert(x);
        } else {
            let c = color(&mut rng);
            let y = oracle.query(at, c);
            if y != tree.invalid() {
                seen.insert(y);
                at = y;
            }
        }
    }
    false
}

/// Success counts for every `h` in `queries`; trial `k` shares one tree
/// across all `h`.
pub fn discovery_counts(n: u32, queries: &[u32], trials: u64, seed: u64) -> Result<Vec<u64>, HarnessError> {
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|k| {
            let s = derive_seed(seed, k);
            let tree = BlackBoxTree::generate(n, derive_seed(s, 0))?;
            Ok(queries
                .iter()
                .map(|&h| discovery_trial(&tree, h, derive_seed(s, 1 + h as u64)) as u64)
                .collect::<Vec<u64>>())
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok((0..queries.len()).map(|i| per_trial.iter().map(|w| w[i]).sum()).collect())
}

/// Fresh-label guessing rates against their union bound.
pub fn cmd_discovery(cfg: &ExperimentConfig) -> Result<(Report, Attachments), HarnessError> {
    let d = &cfg.discovery;
    let mut checks = Vec::new();
    let mut cells = Vec::new();
    for &n in &d.heights {
        let counts = discovery_counts(n, &d.queries, d.trials, derive_seed(cfg.seed, n as u64))?;
        for (&h, &wins) in d.queries.iter().zip(&counts) {
            let rate = Estimate::bernoulli(wins, d.trials);
            let bound = discovery_bound(n, h);
            let sigma = binomial_sigma(bound.min(1.0), d.trials).max(rate.stderr);
            checks.push(Check::statistical(&format!("n{n}/h{h}"), rate.mean, bound, sigma));
            cells.push(json!({ "n": n, "h": h, "trials": d.trials, "successes": wins, "rate": rate, "bound": bound }));
        }
    }
    Ok((Report::new("discovery", cfg, checks, json!({ "cells": cells })), Vec::new()))
}
