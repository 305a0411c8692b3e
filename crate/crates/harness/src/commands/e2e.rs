use serde_json::json;
use welded_core::rng::derive_seed;
use welded_core::stats::binomial_sigma;
use welded_core::walk::walker_success_rate;

use super::simulate::run_simulate;
use super::walk::run_walk;
use crate::config::{ExperimentConfig, WalkSettings};
use crate::error::HarnessError;
use crate::report::{Attachments, Check, Report};

/// `floor(2^{n/3})`.
pub fn walker_budget(n: u32) -> u64 {
    2f64.powf(n as f64 / 3.0).floor() as u64
}

/// The classical walker at budget `2^{n/3}`, the quantum walk at the same
/// height and below, and the simulator checks, in one report.
pub fn cmd_e2e(cfg: &ExperimentConfig) -> Result<(Report, Attachments), HarnessError> {
    let e = &cfg.e2e;
    let mut checks = Vec::new();
    let n = e.walker_height;
    let budget = walker_budget(n);
    let walker = walker_success_rate(n, budget, e.walker_trials, derive_seed(cfg.seed, 1))?;
    checks.push(Check::statistical(
        "e2e/walker-success",
        walker.rate.mean,
        e.walker_ceiling,
        binomial_sigma(e.walker_ceiling, e.walker_trials).max(walker.rate.stderr),
    ));

    let mut heights = e.walk_heights.clone();
    if !heights.contains(&n) {
        heights.push(n);
    }
    let settings = WalkSettings {
        heights,
        ..cfg.walk.clone()
    };
    let walk = run_walk(&settings, derive_seed(cfg.seed, 2))?;
    checks.extend(walk.checks.into_iter().map(|c| c.prefixed("walk")));
    let best = walk.sweeps.iter().find(|s| s.n == n).map_or(0.0, |s| s.best_p);
    let factor = cfg.walk.factor;
    checks.push(Check::at_least(
        "e2e/separation",
        best,
        factor * walker.rate.mean.max(e.walker_ceiling),
    ));

    let (sim_checks, sim_data) = run_simulate(&cfg.simulate, derive_seed(cfg.seed, 3))?;
    checks.extend(sim_checks.into_iter().map(|c| c.prefixed("simulate")));
    let data = json!({
        "walker": walker,
        "walker_budget": budget,
        "walk": walk.data,
        "simulate": sim_data,
    });
    Ok((Report::new("e2e", cfg, checks, data), walk.attachments))
}
