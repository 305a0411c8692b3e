use serde_json::{json, Value};
use welded_core::bottleneck_sim::{bottleneck_wrapper, BottleneckConfig, BottleneckReport, SeedTape};
use welded_core::circuits::random::{random_hybrid, random_jozsa, QueryStyle, RandomCircuitConfig, RandomJozsaConfig};
use welded_core::circuits::{accounting, parse_validated, Circuit, HybridCircuit, HybridKind, JozsaCircuit};
use welded_core::hybrid_sim::{
    compare_to_reference, few_tier_exact, few_tier_query_ceiling, few_tier_wrapper, jozsa_exact, jozsa_query_ceiling,
    jozsa_wrapper,
};
use welded_core::rng::derive_seed;
use welded_core::welded_tree::BlackBoxTree;

use crate::config::{CircuitFamily, ExperimentConfig, FamilyKind, SimulateSettings};
use crate::error::HarnessError;
use crate::report::{Attachments, Check, Report};

/// TV envelope for circuits with outliers: `4 (2^{n+2}-2) / 2^{2n}` per query gate.
pub fn tv_envelope(n: u32, query_gates: usize) -> f64 {
    4.0 * ((1u64 << (n + 2)) - 2) as f64 / (1u64 << (2 * n)) as f64 * query_gates as f64
}

pub fn family_circuit(f: &CircuitFamily, seed: u64) -> Circuit {
    match f.kind {
        FamilyKind::Hybrid | FamilyKind::AllQuantum => {
            let mut cfg = RandomCircuitConfig::new(f.n, f.width, f.tiers, f.depth, f.style);
            if f.kind == FamilyKind::AllQuantum {
                cfg.kind = HybridKind::AllQuantum;
            }
            Circuit::Hybrid(random_hybrid(&cfg, seed))
        }
        FamilyKind::Jozsa => Circuit::Jozsa(random_jozsa(
            &RandomJozsaConfig {
                n: f.n,
                width: f.width,
                blocks: f.tiers,
                classical_depth: f.depth,
                quantum_depth: f.depth,
                style: f.style,
                query_rate: if f.style == QueryStyle::None { 0.0 } else { 0.6 },
                hadamard_rate: 0.35,
            },
            seed,
        )),
    }
}

fn circuits(s: &SimulateSettings, seed: u64) -> Result<Vec<Circuit>, HarnessError> {
    match &s.circuit_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.clone(), e.to_string()))?;
            Ok(vec![parse_validated(&text)?])
        }
        None => Ok((0..s.family.count)
            .map(|i| family_circuit(&s.family, derive_seed(seed, i as u64)))
            .collect()),
    }
}

struct Checks<'a> {
    prefix: &'a str,
    out: &'a mut Vec<Check>,
}

impl Checks<'_> {
    fn push(&mut self, c: Check) {
        self.out.push(c.prefixed(self.prefix));
    }
}

fn hybrid_checks(
    h: &HybridCircuit,
    tree: &BlackBoxTree,
    seed: u64,
    bottleneck: &BottleneckConfig,
    checks: &mut Checks<'_>,
) -> Result<Value, HarnessError> {
    let exact = few_tier_exact::<f64>(h, tree)?;
    let st = &exact.stats;
    checks.push(Check::at_most("tier-ceiling-violations", st.tier_violations as f64, 0.0));
    checks.push(Check::at_most("layer-growth", st.max_growth, 4.0));
    checks.push(Check::at_most("fidelity-identity-gap", st.max_identity_gap, 1e-10));
    let ceiling = few_tier_query_ceiling(h);
    checks.push(Check::at_most("wrapper-queries", st.max_queries as f64, ceiling as f64));

    let run = few_tier_wrapper::<f64>(h, tree, h.tiers.len(), seed)?;
    let off = bottleneck_wrapper::<f64>(h, tree, h.tiers.len(), seed, &BottleneckConfig::disabled())?;
    checks.push(Check::holds("tau-zero-transcript", off.transcript.to_json() == run.transcript.to_json()));

    let b = bottleneck_wrapper::<f64>(h, tree, h.tiers.len(), seed, bottleneck)?;
    let report = BottleneckReport::new(h, SeedTape::for_circuit(h, seed).bits, &b);
    let c = &report.ceilings;
    checks.push(Check::at_most("bottleneck-loop", c.max_loop_iterations as f64, c.loop_ceiling as f64));
    checks.push(Check::holds("bottleneck-size", c.size_ok));
    checks.push(Check::holds("bottleneck-subset-chain", c.subset_chain_ok));
    Ok(json!({
        "exact": {
            "branches": st.branches,
            "max_queries": st.max_queries,
            "query_ceiling": ceiling.to_string(),
            "max_growth": st.max_growth,
            "max_identity_gap": st.max_identity_gap,
            "max_outlier_mass": st.max_outlier_mass,
        },
        "transcript": run.transcript,
        "bottleneck": report,
    }))
}

fn jozsa_checks(j: &JozsaCircuit, tree: &BlackBoxTree, seed: u64, checks: &mut Checks<'_>) -> Result<Value, HarnessError> {
    let exact = jozsa_exact::<f64>(j, tree)?;
    let run = jozsa_wrapper::<f64>(j, tree, seed)?;
    let ceiling = jozsa_query_ceiling(j);
    checks.push(Check::at_most("jozsa-queries", run.transcript.queries as f64, ceiling as f64));
    checks.push(Check::at_most("fidelity-identity-gap", exact.stats.max_identity_gap, 1e-10));
    Ok(json!({
        "exact": {
            "branches": exact.stats.branches,
            "max_queries": exact.stats.max_queries,
            "max_outlier_mass": exact.stats.max_outlier_mass,
        },
        "query_ceiling": ceiling.to_string(),
        "transcript": run.transcript,
    }))
}

pub(crate) fn run_simulate(s: &SimulateSettings, seed: u64) -> Result<(Vec<Check>, Value), HarnessError> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (i, circuit) in circuits(s, seed)?.iter().enumerate() {
        let cs = derive_seed(seed, 1 << 32 | i as u64);
        let n = circuit.n();
        let tree = BlackBoxTree::generate(n, derive_seed(cs, 0))?;
        let prefix = format!("circuit{i}");
        let mut c = Checks {
            prefix: &prefix,
            out: &mut checks,
        };
        let acc = accounting(circuit)?;
        let cmp = compare_to_reference::<f64>(circuit, &tree, s.labelings, derive_seed(cs, 1))?;
        if cmp.max_outlier_mass == 0.0 {
            c.push(Check::at_most("tv-without-outliers", cmp.max_tv, 1e-12));
        } else {
            let bound = tv_envelope(n, acc.query_gates);
            c.push(Check::statistical("tv-envelope", cmp.tv.mean, bound, cmp.tv.stderr));
        }
        let detail = match circuit {
            Circuit::Hybrid(h) => hybrid_checks(h, &tree, derive_seed(cs, 2), &s.bottleneck, &mut c)?,
            Circuit::Jozsa(j) => jozsa_checks(j, &tree, derive_seed(cs, 2), &mut c)?,
        };
        rows.push(json!({
            "index": i,
            "n": n,
            "accounting": acc,
            "comparison": cmp,
            "detail": detail,
        }));
    }
    Ok((checks, json!({ "circuits": rows })))
}

/// Runs every simulator on the configured circuits and compares them with
/// the exact executor.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<(Report, Attachments), HarnessError> {
    let (checks, data) = run_simulate(&cfg.simulate, cfg.seed)?;
    Ok((Report::new("simulate", cfg, checks, data), Vec::new()))
}
