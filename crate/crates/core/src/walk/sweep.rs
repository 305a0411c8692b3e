use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::reduced::{build_reduced, evolve_exit_probability};
use crate::error::Result;
use crate::welded_tree::TreeStructure;

/// Exit probability over a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub n: u32,
    pub seed: u64,
    pub t_max: f64,
    pub best_t: f64,
    pub best_p: f64,
    /// `(t, p)` pairs.
    pub curve: Vec<(f64, f64)>,
}

/// Evaluates the reduced walk of a random welding at `steps` evenly spaced
/// times in `[0, t_max]` and keeps the best.
pub fn sweep(n: u32, t_max: f64, steps: usize, seed: u64) -> Result<Sweep> {
    let rw = build_reduced(&TreeStructure::generate(n, seed)?);
    let at = |k: usize| match steps {
        1 => t_max,
        _ => t_max * k as f64 / (steps - 1) as f64,
    };
    let curve: Vec<(f64, f64)> = (0..steps)
        .into_par_iter()
        .map(|k| (at(k), evolve_exit_probability(&rw, at(k))))
        .collect();
    let (best_t, best_p) = curve
        .iter()
        .copied()
        .fold((0.0, 0.0), |best, (t, p)| if p > best.1 { (t, p) } else { best });
    Ok(Sweep {
        n,
        seed,
        t_max,
        best_t,
        best_p,
        curve,
    })
}

/// `t,p` header and one row per point.
pub fn curve_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("t,p\n");
    for (t, p) in curve {
        writeln!(out, "{t},{p}").unwrap();
    }
    out
}
