use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::estimate::{draw_batch, fresh_labels, fresh_rng, EstimatorContext, Probability};
use crate::error::Result;
use crate::hybrid_sim::KnownVertices;
use crate::welded_tree::Label;

/// Result of one bottleneck call.
#[derive(Debug, Clone, PartialEq)]
pub enum Bottleneck {
    Known(KnownVertices),
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbortCause {
    /// Too few trees reproduce the tier input.
    Ratio,
    /// A label outside the history is likely to be valid.
    FreshLabel,
}

/// A label and its membership estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelEstimate {
    pub label: Label,
    pub probability: Probability,
    /// Whether the label was drawn at random rather than taken from the history.
    pub fresh: bool,
}

/// Estimates behind one call.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CallEstimates {
    pub ratio: Option<Probability>,
    /// Labels that violated the threshold, in the order they were handled.
    pub violations: Vec<LabelEstimate>,
    /// Largest non-violating estimate seen in the final scan.
    pub max_rejected: Option<LabelEstimate>,
    pub inconclusive: u64,
}

/// One bottleneck call as it appears in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BottleneckCall {
    pub tier: usize,
    /// `0` at tier start, `l` after layer `l`.
    pub layer: usize,
    pub aborts: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort_cause: Option<AbortCause>,
    pub loop_iterations: usize,
    pub v_current: usize,
    pub v_hist: usize,
    pub v_returned: usize,
    /// `V_current <= V_returned <= V_hist` with `V_returned` rooted at the
    /// entrance. Vacuous on ABORT.
    pub subset_chain: bool,
    pub estimates: CallEstimates,
    #[serde(skip)]
    pub returned: Option<KnownVertices>,
}

impl BottleneckCall {
    fn new(tier: usize, layer: usize, current: &KnownVertices, hist: &KnownVertices) -> Self {
        Self {
            tier,
            layer,
            aborts: 0,
            abort_cause: None,
            loop_iterations: 0,
            v_current: current.size(),
            v_hist: hist.size(),
            v_returned: 0,
            subset_chain: true,
            estimates: CallEstimates::default(),
            returned: None,
        }
    }
}

/// `2 (g + |r|)`.
pub fn loop_ceiling(g: usize, tape_bits: u64) -> u64 {
    2 * (g as u64 + tape_bits)
}

/// `|V_current| + 2n (g + |r|)`.
pub fn size_ceiling(current: usize, n: u32, g: usize, tape_bits: u64) -> u64 {
    current as u64 + 2 * n as u64 * (g as u64 + tape_bits)
}

/// Adds `b`, here a label of `hist` that `v` lacks, together with the path
/// from the entrance, and returns the grown dictionary.
fn add_from_history(v: &KnownVertices, hist: &KnownVertices, b: Label) -> KnownVertices {
    let mut targets: BTreeSet<Label> = v.key_vertices().collect();
    if hist.is_key_vertex(b) {
        targets.insert(b);
    } else if let Some((parent, _)) = hist.iter().find(|(_, a)| a.contains(&b)) {
        targets.insert(parent);
    }
    hist.restricted_to(&hist.rooted_closure(&targets))
}

/// Shrinks the simulator's dictionary to what the tier input still reveals.
///
/// Starting from `current`, repeatedly looks for a label not yet in the
/// dictionary whose estimated validity, over trees that reproduce the
/// context's target, exceeds `tau`. Labels of `hist` are scanned in
/// ascending order, then `fresh_candidates` random strings. A history label
/// is added along with the path joining it to the entrance as soon as its
/// estimate exceeds `tau`; a fresh one aborts, but only when its three-sigma
/// lower bound does. The call also aborts up front when the consistency
/// ratio's upper bound is below `rho`. `slot` separates the estimator streams of calls
/// within one tier.
pub fn bottleneck(
    ctx: &EstimatorContext<'_>,
    current: &KnownVertices,
    hist: &KnownVertices,
    tier: usize,
    slot: usize,
) -> Result<(Bottleneck, BottleneckCall)> {
    let mut call = BottleneckCall::new(tier, slot, current, hist);
    let n = ctx.n();
    let Some(tau) = ctx.config.tau(n) else {
        call.v_returned = hist.size();
        call.subset_chain = current.is_subset_of(hist) && hist.is_entrance_rooted();
        call.returned = Some(hist.clone());
        return Ok((Bottleneck::Known(hist.clone()), call));
    };
    let rho_log2 = ctx.config.rho_log2(n, ctx.circuit.width, ctx.tape.bits);
    let hist_labels = hist.labels();
    let mut v = current.clone();
    loop {
        let seed = ctx.tape.estimator(tier, slot, call.loop_iterations);
        let batch = draw_batch(ctx, &v, seed)?;
        if call.loop_iterations == 0 {
            call.estimates.ratio = Some(batch.ratio);
            if batch.ratio.upper().is_some_and(|u| u.log2() < rho_log2) {
                call.aborts = 1;
                call.abort_cause = Some(AbortCause::Ratio);
                return Ok((Bottleneck::Abort, call));
            }
        }
        let known = v.labels();
        let mut violator = None;
        let mut max_rejected: Option<LabelEstimate> = None;
        let mut consider = |b: Label, fresh: bool, call: &mut BottleneckCall| -> bool {
            let p = batch.membership(&v, b);
            let est = LabelEstimate { label: b, probability: p, fresh };
            let decisive = if fresh { p.lower() } else { p.value() };
            match decisive {
                None => call.estimates.inconclusive += 1,
                Some(x) if x > tau => {
                    violator = Some(est);
                    return true;
                }
                Some(_) => {
                    let x = p.value().unwrap_or(0.0);
                    if max_rejected.is_none_or(|m| m.probability.value().unwrap_or(0.0) < x) {
                        max_rejected = Some(est);
                    }
                }
            }
            false
        };
        let mut found = hist_labels
            .iter()
            .filter(|b| !known.contains(b))
            .any(|&b| consider(b, false, &mut call));
        if !found {
            let avoid = |b: Label| hist_labels.contains(&b) || known.contains(&b);
            let fresh = fresh_labels(n, ctx.config.fresh_candidates, &avoid, &mut fresh_rng(seed));
            found = fresh.into_iter().any(|b| consider(b, true, &mut call));
        }
        let Some(b) = violator.filter(|_| found) else {
            call.estimates.max_rejected = max_rejected;
            break;
        };
        call.loop_iterations += 1;
        call.estimates.violations.push(b);
        if b.fresh {
            call.aborts = 1;
            call.abort_cause = Some(AbortCause::FreshLabel);
            return Ok((Bottleneck::Abort, call));
        }
        v = add_from_history(&v, hist, b.label);
    }
    let mut targets: BTreeSet<Label> = v.key_vertices().collect();
    targets.insert(Label::ENTRANCE);
    let complete = hist.restricted_to(&hist.rooted_closure(&targets));
    call.v_returned = complete.size();
    call.subset_chain =
        current.is_subset_of(&complete) && complete.is_subset_of(hist) && complete.is_entrance_rooted();
    call.returned = Some(complete.clone());
    Ok((Bottleneck::Known(complete), call))
}
