use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{BottleneckConfig, Ensemble};
use super::tape::SeedTape;
use crate::circuits::HybridCircuit;
use crate::error::{Error, Result};
use crate::hybrid_sim::{few_tier_output, KnownVertices};
use crate::rng::{derive_seed, rng_from_seed, uniform_u64};
use crate::statevec::Bits;
use crate::stats::Estimate;
use crate::welded_tree::{label_mask, sample_consistent, BlackBoxTree, Label, SamplingMode};

/// A probability that is either known in closed form, estimated, or could
/// not be estimated because no sampled tree reproduced the target output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Probability {
    Exact { value: f64 },
    Sampled { estimate: Estimate },
    Inconclusive { drawn: u64 },
}

impl Probability {
    pub fn value(&self) -> Option<f64> {
        match self {
            Probability::Exact { value } => Some(*value),
            Probability::Sampled { estimate } => Some(estimate.mean),
            Probability::Inconclusive { .. } => None,
        }
    }

    pub fn stderr(&self) -> f64 {
        match self {
            Probability::Sampled { estimate } => estimate.stderr,
            _ => 0.0,
        }
    }

    /// Three-sigma lower bound, with a `1/k` floor on sigma for sampled values.
    pub fn lower(&self) -> Option<f64> {
        match self {
            Probability::Exact { value } => Some(*value),
            Probability::Sampled { estimate } => {
                let floor = 1.0 / estimate.samples.max(1) as f64;
                Some(estimate.mean - 3.0 * estimate.stderr.max(floor))
            }
            Probability::Inconclusive { .. } => None,
        }
    }

    /// Three-sigma upper bound, with a `1/k` floor on sigma for sampled values.
    pub fn upper(&self) -> Option<f64> {
        match self {
            Probability::Exact { value } => Some(*value),
            Probability::Sampled { estimate } => {
                let floor = 1.0 / estimate.samples.max(1) as f64;
                Some(estimate.mean + 3.0 * estimate.stderr.max(floor))
            }
            Probability::Inconclusive { .. } => None,
        }
    }
}

/// What the estimators condition on: the circuit's first `tiers` tiers run
/// with seed prefix `tape` must output `target`.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorContext<'a> {
    pub circuit: &'a HybridCircuit,
    pub tiers: usize,
    pub target: Bits,
    pub tape: SeedTape,
    pub config: &'a BottleneckConfig,
    /// Welding and coloring kept in labels-only mode.
    pub template: &'a BlackBoxTree,
}

impl EstimatorContext<'_> {
    pub fn n(&self) -> u32 {
        self.circuit.n
    }

    fn mode(&self) -> SamplingMode<'_> {
        match self.config.ensemble {
            Ensemble::Structures => SamplingMode::Structures,
            Ensemble::LabelsOnly => SamplingMode::LabelsOnly(self.template),
        }
    }

    /// Output of the simulated first `tiers` tiers on `p`, `None` if that
    /// run aborted.
    pub fn replay(&self, p: &BlackBoxTree) -> Result<Option<Bits>> {
        if self.config.nesting == 0 {
            return few_tier_output::<f64, _>(self.circuit, p.handle(), self.tiers, self.tape.root).map(Some);
        }
        let nested = self.config.nested();
        let run = super::wrapper::bottleneck_run::<f64, _>(self.circuit, p, p.handle(), self.tiers, self.tape, &nested)?;
        Ok((!run.aborted).then_some(run.output))
    }
}

/// Consistent trees drawn for one dictionary.
#[derive(Debug, Clone)]
pub struct Batch {
    /// Trees successfully sampled.
    pub drawn: u64,
    /// Draws where no consistent tree was found.
    pub failed: u64,
    pub ratio: Probability,
    /// Sampled trees that reproduced the target.
    pub accepted: Vec<BlackBoxTree>,
    exact_prefix: bool,
    n: u32,
}

/// `P[b valid]` for a uniformly labeled tree consistent with `v` when
/// nothing else is conditioned on.
pub fn unconditioned_membership(v: &KnownVertices, b: Label) -> f64 {
    let n = v.height();
    if b == Label::invalid(n) {
        return 0.0;
    }
    let mut labels = v.labels();
    if labels.contains(&b) || b == Label::ENTRANCE {
        return 1.0;
    }
    labels.insert(Label::ENTRANCE);
    let vertices = (1u64 << (n + 2)) - 2;
    let l = labels.len() as u64;
    (vertices - l) as f64 / (label_mask(n) - l) as f64
}

impl Batch {
    /// Membership estimate for `b` over the accepted trees.
    pub fn membership(&self, v: &KnownVertices, b: Label) -> Probability {
        if b == Label::invalid(self.n) {
            return Probability::Exact { value: 0.0 };
        }
        if b == Label::ENTRANCE || v.is_known_vertex(b) {
            return Probability::Exact { value: 1.0 };
        }
        if self.exact_prefix {
            return Probability::Exact {
                value: unconditioned_membership(v, b),
            };
        }
        if self.accepted.is_empty() {
            return Probability::Inconclusive { drawn: self.drawn };
        }
        let hits = self.accepted.iter().filter(|p| p.is_valid_label(b)).count() as u64;
        Probability::Sampled {
            estimate: Estimate::bernoulli(hits, self.accepted.len() as u64),
        }
    }
}

struct Draw {
    tree: Option<BlackBoxTree>,
    matches: bool,
}

fn draw_one(ctx: &EstimatorContext<'_>, v: &KnownVertices, seed: u64) -> Result<Draw> {
    let p = match sample_consistent(v, ctx.mode(), seed) {
        Ok(p) => p,
        Err(Error::EmbeddingFailed(_)) => return Ok(Draw { tree: None, matches: false }),
        Err(e) => return Err(e),
    };
    let matches = ctx.replay(&p)? == Some(ctx.target);
    Ok(Draw { tree: Some(p), matches })
}

/// Draws trees consistent with `v` in chunks of `samples`, in parallel, until
/// `samples` of them reproduce the target or `budget` draws are spent. The
/// ratio uses the first chunk. With no tiers to replay everything is known
/// in closed form and nothing is drawn.
pub fn draw_batch(ctx: &EstimatorContext<'_>, v: &KnownVertices, seed: u64) -> Result<Batch> {
    let n = ctx.n();
    let mut batch = Batch {
        drawn: 0,
        failed: 0,
        ratio: Probability::Inconclusive { drawn: 0 },
        accepted: Vec::new(),
        exact_prefix: ctx.tiers == 0,
        n,
    };
    if ctx.tiers == 0 {
        let zero = ctx.target == Bits::zeros(ctx.circuit.input_width());
        batch.ratio = Probability::Exact {
            value: if zero { 1.0 } else { 0.0 },
        };
        return Ok(batch);
    }
    let chunk = ctx.config.samples.max(1);
    let budget = ctx.config.budget.max(chunk);
    let mut start = 0;
    while start < budget && batch.accepted.len() < chunk {
        let end = (start + chunk).min(budget);
        let draws: Vec<Draw> = (start..end)
            .into_par_iter()
            .map(|k| draw_one(ctx, v, derive_seed(seed, k as u64)))
            .collect::<Result<_>>()?;
        let first = start == 0;
        let mut matches = 0u64;
        let mut ok = 0u64;
        for d in draws {
            match d.tree {
                Some(t) => {
                    ok += 1;
                    if d.matches {
                        matches += 1;
                        if batch.accepted.len() < chunk {
                            batch.accepted.push(t);
                        }
                    }
                }
                None => batch.failed += 1,
            }
        }
        batch.drawn += ok;
        if first {
            batch.ratio = if ok == 0 {
                Probability::Inconclusive { drawn: 0 }
            } else {
                Probability::Sampled {
                    estimate: Estimate::bernoulli(matches, ok),
                }
            };
        }
        start = end;
    }
    Ok(batch)
}

/// Fraction of trees consistent with `v` whose replay outputs the target.
pub fn estimate_consistency_ratio(ctx: &EstimatorContext<'_>, v: &KnownVertices, seed: u64) -> Result<Probability> {
    Ok(draw_batch(ctx, v, seed)?.ratio)
}

/// Probability that `b` is a valid label of a tree consistent with `v`
/// whose replay outputs the target.
pub fn estimate_membership_probability(
    ctx: &EstimatorContext<'_>,
    v: &KnownVertices,
    b: Label,
    seed: u64,
) -> Result<Probability> {
    let n = ctx.n();
    if b == Label::invalid(n) || b == Label::ENTRANCE || v.is_known_vertex(b) {
        let value = if b == Label::invalid(n) { 0.0 } else { 1.0 };
        return Ok(Probability::Exact { value });
    }
    Ok(draw_batch(ctx, v, seed)?.membership(v, b))
}

/// Up to `count` distinct random labels that are neither INVALID nor in
/// `avoid`.
pub(crate) fn fresh_labels<R: RngCore>(n: u32, count: usize, avoid: &dyn Fn(Label) -> bool, rng: &mut R) -> Vec<Label> {
    let space = label_mask(n);
    let mut out: Vec<Label> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 64 * count.max(1) {
        attempts += 1;
        let b = Label(uniform_u64(rng, 0, space));
        if !avoid(b) && !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

pub(crate) fn fresh_rng(seed: u64) -> crate::rng::Rng64 {
    rng_from_seed(derive_seed(seed, u64::MAX))
}
