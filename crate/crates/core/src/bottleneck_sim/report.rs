use serde::{Deserialize, Serialize};

use super::core::{loop_ceiling, size_ceiling, BottleneckCall};
use super::wrapper::BottleneckRun;
use crate::circuits::HybridCircuit;
use crate::statevec::Bits;

/// Ceiling checks over every call of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeilingCheck {
    pub loop_ceiling: u64,
    pub max_loop_iterations: usize,
    pub loop_ok: bool,
    /// Largest `|V_returned| - |V_current|` and the slack it is checked against.
    pub max_growth: i64,
    pub growth_ceiling: u64,
    pub size_ok: bool,
    pub subset_chain_ok: bool,
    /// Largest per-tier growth of `V_hist`, against `q 2^q 2n (g + |r|)`.
    pub max_hist_growth: usize,
    pub hist_growth_ceiling: u64,
}

/// Serializable summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BottleneckReport {
    pub output: Bits,
    pub aborted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abort_tier: Option<usize>,
    pub queries: u64,
    pub v_known: usize,
    pub v_hist: usize,
    pub ceilings: CeilingCheck,
    pub calls: Vec<BottleneckCall>,
}

impl BottleneckReport {
    pub fn new(circuit: &HybridCircuit, tape_bits: u64, run: &BottleneckRun) -> Self {
        Self {
            output: run.output,
            aborted: run.aborted,
            abort_tier: run.abort_tier,
            queries: run.transcript.queries,
            v_known: run.known.size(),
            v_hist: run.hist.size(),
            ceilings: check_ceilings(circuit, tape_bits, run),
            calls: run.calls.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Loop, size, subset-chain and history-growth checks for `run`.
pub fn check_ceilings(circuit: &HybridCircuit, tape_bits: u64, run: &BottleneckRun) -> CeilingCheck {
    let n = circuit.n;
    let g = circuit.width;
    let lc = loop_ceiling(g, tape_bits);
    let slack = size_ceiling(0, n, g, tape_bits);
    let max_loop = run.calls.iter().map(|c| c.loop_iterations).max().unwrap_or(0);
    let max_growth = run
        .calls
        .iter()
        .filter(|c| c.aborts == 0)
        .map(|c| c.v_returned as i64 - c.v_current as i64)
        .max()
        .unwrap_or(0);
    let size_ok = run
        .calls
        .iter()
        .filter(|c| c.aborts == 0)
        .all(|c| (c.v_returned as u64) <= size_ceiling(c.v_current, n, g, tape_bits));
    let q = circuit.tiers.iter().map(|t| t.depth()).max().unwrap_or(0) as u32;
    let hist_growth_ceiling = (q as u64)
        .saturating_mul(1u64.checked_shl(q).unwrap_or(u64::MAX))
        .saturating_mul(slack);
    let max_hist_growth = run
        .hist_sizes
        .windows(2)
        .map(|w| w[1].saturating_sub(w[0]))
        .max()
        .unwrap_or(0);
    CeilingCheck {
        loop_ceiling: lc,
        max_loop_iterations: max_loop,
        loop_ok: max_loop as u64 <= lc,
        max_growth,
        growth_ceiling: slack,
        size_ok,
        subset_chain_ok: subset_chain_holds(&run.calls),
        max_hist_growth,
        hist_growth_ceiling,
    }
}

fn subset_chain_holds(calls: &[BottleneckCall]) -> bool {
    calls.iter().all(|c| c.subset_chain)
}
