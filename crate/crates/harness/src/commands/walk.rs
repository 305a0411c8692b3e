use serde_json::{json, Value};
use welded_core::rng::{derive_seed, rng_from_seed, unit_f64};
use welded_core::walk::{
    build_reduced, curve_csv, evolve_exit_probability, full_graph_evolve, sweep, walker_success_rate, Sweep,
    FULL_GRAPH_MAX_HEIGHT,
};
use welded_core::welded_tree::TreeStructure;

use rand::RngCore;

use crate::config::{ExperimentConfig, WalkSettings};
use crate::error::HarnessError;
use crate::report::{Attachments, Check, Relation, Report};

pub(crate) struct WalkOutcome {
    pub checks: Vec<Check>,
    pub data: Vec<Value>,
    pub attachments: Attachments,
    pub sweeps: Vec<Sweep>,
}

pub(crate) fn run_walk(settings: &WalkSettings, seed: u64) -> Result<WalkOutcome, HarnessError> {
    let mut out = WalkOutcome {
        checks: Vec::new(),
        data: Vec::new(),
        attachments: Vec::new(),
        sweeps: Vec::new(),
    };
    for &n in &settings.heights {
        let s = derive_seed(seed, n as u64);
        let tag = format!("n{n}");
        let structure = TreeStructure::generate(n, s)?;
        let rw = build_reduced(&structure);
        out.checks.push(Check::at_most(&format!("{tag}/projection-residual"), rw.residual, 1e-12));
        out.checks.push(Check::holds(
            &format!("{tag}/symmetric-tridiagonal"),
            rw.is_symmetric(1e-12) && rw.is_tridiagonal(1e-12),
        ));
        let sw = sweep(n, settings.horizon(n), settings.steps, s)?;
        out.checks.push(Check::at_least(&format!("{tag}/best-p-positive"), sw.best_p, f64::MIN_POSITIVE));

        let mut agreement = Value::Null;
        if n <= FULL_GRAPH_MAX_HEIGHT && settings.cross_checks > 0 {
            let mut rng = rng_from_seed(derive_seed(s, 1));
            let (mut diff, mut drift) = (0.0f64, 0.0f64);
            for _ in 0..settings.cross_checks {
                let t = unit_f64(rng.next_u64()) * settings.horizon(n);
                let full = full_graph_evolve(&structure, t)?;
                diff = diff.max((full.exit - evolve_exit_probability(&rw, t)).abs());
                drift = drift.max((full.total - 1.0).abs());
            }
            out.checks.push(Check::at_most(&format!("{tag}/reduced-vs-full"), diff, 1e-9));
            out.checks.push(Check::at_most(&format!("{tag}/full-norm-drift"), drift, 1e-9));
            agreement = json!({ "times": settings.cross_checks, "max_difference": diff, "max_norm_drift": drift });
        }

        let budget = settings.walker_budget.unwrap_or(sw.best_t.ceil() as u64);
        let walker = walker_success_rate(n, budget, settings.walker_trials, derive_seed(s, 2))?;
        out.checks.push(Check::info(
            &format!("{tag}/walk-over-walker"),
            sw.best_p,
            Relation::AtLeast,
            settings.factor * walker.rate.mean,
        ));
        let csv = format!("walk-n{n}.csv");
        out.data.push(json!({
            "n": n,
            "seed": s,
            "t_max": sw.t_max,
            "steps": settings.steps,
            "best_t": sw.best_t,
            "best_p": sw.best_p,
            "matrix": rw.matrix,
            "occupancy": rw.occupancy,
            "full_graph": agreement,
            "walker": walker,
            "curve": csv,
        }));
        out.attachments.push((csv, curve_csv(&sw.curve)));
        out.sweeps.push(sw);
    }
    Ok(out)
}

/// Sweeps the reduced walk at every configured height and compares it with
/// the classical walker.
pub fn cmd_walk(cfg: &ExperimentConfig) -> Result<(Report, Attachments), HarnessError> {
    let w = run_walk(&cfg.walk, cfg.seed)?;
    let report = Report::new("walk", cfg, w.checks, json!({ "heights": w.data }));
    Ok((report, w.attachments))
}
