//! Bottleneck estimators against exhaustive enumeration at height two.

use welded_core::bottleneck_sim::{draw_batch, BottleneckConfig, Ensemble, EstimatorContext, SeedTape};
use welded_core::circuits::random::{random_hybrid, QueryStyle, RandomCircuitConfig};
use welded_core::circuits::{Gate, HybridCircuit, HybridKind, Layer, QueryWires, Tier};
use welded_core::hybrid_sim::{few_tier_output, KnownVertices};
use welded_core::rng::{rng_from_seed, uniform_u64};
use welded_core::welded_tree::{label_mask, BlackBoxTree, Label};

use crate::enumerate::{exhaustive_estimates, history_candidates};

/// A classical first tier that walks two edges from the entrance and leaves
/// the second label in its output, so the output pins down a label only the
/// run itself reveals.
pub fn two_hop(t: &BlackBoxTree, tiers: usize) -> HybridCircuit {
    let n = 2;
    let s = t.structure();
    let k = t.coloring().incident_colors(s.entrance())[0];
    let child = t.coloring().neighbor(s.entrance(), k).unwrap();
    let k2 = *t.coloring().incident_colors(child).iter().find(|&&c| c != k).unwrap();
    let set = |code: u8| (0..4).filter(move |j| (code >> j) & 1 == 1).map(|j| Gate::Not(4 + j)).collect::<Vec<_>>();
    let hop2 = QueryWires { x: (8..12).collect(), c: [4, 5, 6, 7], y: (0..4).collect() };
    let first = Tier::classical(
        2,
        vec![
            Layer::grow(2, 12),
            Layer::square(12, set(k)),
            Layer::square(12, vec![Gate::Query(QueryWires::contiguous(n, 0))]),
            Layer::square(12, set(k ^ k2)),
            Layer::square(12, vec![Gate::Query(hop2)]),
        ],
    );
    let mut all = vec![first];
    for j in 1..tiers {
        all.push(Tier::new(HybridKind::Alternating.expected_tier(j), 12, vec![Layer::identity(12)]));
    }
    HybridCircuit::new(n, 12, HybridKind::Alternating, all)
}

#[derive(Debug, Clone, Default)]
pub struct Agreement {
    /// Cases where enumeration finished.
    pub compared: usize,
    /// Compared cases with more than one path and a ratio below one.
    pub nontrivial: usize,
    /// Estimates compared, ratio and membership together.
    pub estimates: usize,
    /// Largest `|estimate - exact| / sigma`.
    pub worst_z: f64,
    pub failures: Vec<String>,
}

fn z_score(est: f64, stderr: f64, exact: f64, samples: u64) -> f64 {
    let floor = (exact * (1.0 - exact) / samples as f64).sqrt().max(1.0 / samples as f64);
    (est - exact).abs() / stderr.max(floor)
}

/// Compares the ratio and membership estimators of tier 1 with exhaustive
/// enumeration on `cases` circuits: even cases use [`two_hop`], odd ones
/// random all-quantum circuits. Estimates agree when within three sigma.
pub fn estimator_agreement(cases: u64, samples: usize) -> Agreement {
    let n = 2;
    let mut out = Agreement::default();
    for seed in 0..cases {
        let t = BlackBoxTree::generate(n, 500 + seed).unwrap();
        let c = if seed % 2 == 0 {
            two_hop(&t, 2)
        } else {
            let mut cfg = RandomCircuitConfig::new(n, 12, 2, 3, QueryStyle::Truthful);
            cfg.kind = HybridKind::AllQuantum;
            random_hybrid(&cfg, seed)
        };
        let tape = SeedTape::for_circuit(&c, seed).prefix(1);
        let target = few_tier_output::<f64, _>(&c, t.handle(), 1, tape.root).unwrap();
        let mut h = t.handle();
        let v = KnownVertices::entrance(&mut h);
        let mut hist = v.clone();
        for l in v.frontier() {
            hist.expand(l, &mut h);
        }
        let mut candidates = history_candidates(&v, &hist);
        let mut rng = rng_from_seed(seed);
        candidates.extend((0..3).map(|_| Label(uniform_u64(&mut rng, 1, label_mask(n)))));
        let Some(exact) = exhaustive_estimates(&c, &t, &v, 1, tape.root, target, &candidates, 200_000) else {
            continue;
        };
        if (exact.total - 1.0).abs() > 1e-9 {
            out.failures.push(format!("case {seed}: enumeration weights sum to {}", exact.total));
        }
        let cfg = BottleneckConfig {
            samples,
            budget: 10 * samples,
            ensemble: Ensemble::LabelsOnly,
            ..BottleneckConfig::for_height(n)
        };
        let ctx = EstimatorContext { circuit: &c, tiers: 1, target, tape, config: &cfg, template: &t };
        let batch = draw_batch(&ctx, &v, seed).unwrap();
        let mut judge = |what: String, est: f64, stderr: f64, exact: f64, k: u64| {
            let z = z_score(est, stderr, exact, k);
            out.estimates += 1;
            out.worst_z = out.worst_z.max(z);
            if z > 3.0 {
                out.failures.push(format!("case {seed} {what}: {est} vs {exact}"));
            }
        };
        let r = batch.ratio;
        judge("ratio".into(), r.value().unwrap_or(f64::NAN), r.stderr(), exact.ratio, samples as u64);
        for (b, m) in &exact.membership {
            let p = batch.membership(&v, *b);
            let (Some(m), Some(est)) = (m, p.value()) else { continue };
            judge(format!("label {b}"), est, p.stderr(), *m, batch.accepted.len() as u64);
        }
        out.compared += 1;
        if exact.paths > 1 && exact.ratio < 1.0 {
            out.nontrivial += 1;
        }
    }
    out
}
