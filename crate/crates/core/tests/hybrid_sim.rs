use welded_core::circuits::random::{random_hybrid, random_jozsa, QueryStyle, RandomCircuitConfig, RandomJozsaConfig};
use welded_core::circuits::{accounting, Circuit, HybridKind, Tier};
use welded_core::hybrid_sim::{few_tier_exact, few_tier_wrapper, jozsa_exact, jozsa_wrapper, KnownVertices};
use welded_core::statevec::{run_hybrid_exact, run_jozsa_exact, Bits};
use welded_core::welded_tree::{replays, BlackBoxTree};

fn tree(n: u32, seed: u64) -> BlackBoxTree {
    BlackBoxTree::generate(n, seed).unwrap()
}

#[test]
fn zero_tiers_is_entrance_only() {
    let t = tree(2, 1);
    let c = random_hybrid(&RandomCircuitConfig::new(2, 12, 3, 2, QueryStyle::Random), 4);
    let run = few_tier_wrapper::<f64>(&c, &t, 0, 7).unwrap();
    assert_eq!(run.output, Bits::zeros(2));
    assert_eq!(run.known, KnownVertices::entrance(&mut t.handle()));
    assert_eq!(run.transcript.queries, 1);
}

#[test]
fn query_free_matches_reference() {
    for seed in 0..10 {
        let t = tree(2, seed);
        let c = random_hybrid(&RandomCircuitConfig::new(2, 10, 4, 3, QueryStyle::None), seed);
        let sim = few_tier_exact::<f64>(&c, &t).unwrap();
        let reference = run_hybrid_exact::<f64>(&c, &t).unwrap();
        assert!(sim.distribution.total_variation(&reference) < 1e-12);
    }
}

#[test]
fn truthful_circuits_are_exact() {
    for seed in 0..30 {
        let t = tree(2, 100 + seed);
        let mut cfg = RandomCircuitConfig::new(2, 12 + 4 * (seed as usize % 3), 1 + seed as usize % 4, 3, QueryStyle::Truthful);
        if seed % 3 == 0 {
            cfg.kind = HybridKind::AllQuantum;
        }
        let c = random_hybrid(&cfg, seed);
        let sim = few_tier_exact::<f64>(&c, &t).unwrap();
        let reference = run_hybrid_exact::<f64>(&c, &t).unwrap();
        assert_eq!(sim.stats.max_outlier_mass, 0.0, "seed {seed}");
        assert!(sim.distribution.total_variation(&reference) < 1e-12, "seed {seed}");
    }
}

#[test]
fn sampled_run_replays_and_is_deterministic() {
    let t = tree(2, 5);
    let c = random_hybrid(&RandomCircuitConfig::new(2, 16, 4, 3, QueryStyle::Truthful), 11);
    let a = few_tier_wrapper::<f64>(&c, &t, 4, 3).unwrap();
    let b = few_tier_wrapper::<f64>(&c, &t, 4, 3).unwrap();
    assert_eq!(a.transcript.to_json(), b.transcript.to_json());
    assert!(replays(&a.known, &t));
    let q: Vec<u64> = a.transcript.tiers.iter().map(|t| t.vertex_queries).collect();
    assert_eq!(1 + q.iter().sum::<u64>(), a.transcript.queries);
}

#[test]
fn ceilings_and_fidelity_identity() {
    for seed in 0..20 {
        let n = 2 + (seed % 2) as u32;
        let width = if n == 2 { 12 } else { 16 };
        let c = random_hybrid(&RandomCircuitConfig::new(n, width, 1 + seed as usize % 4, 3, QueryStyle::Random), seed);
        let t = tree(n, seed);
        let sim = few_tier_exact::<f64>(&c, &t).unwrap();
        assert_eq!(sim.stats.tier_violations, 0);
        assert!(sim.stats.max_growth <= 4.0);
        assert!(sim.stats.max_identity_gap <= 1e-10, "{}", sim.stats.max_identity_gap);
        let a = accounting(&Circuit::Hybrid(c.clone())).unwrap();
        let d = c.tiers.iter().map(Tier::depth).max().unwrap() as u32;
        let bound = 4f64.powi((c.tiers.len() as u32 * (d + 1)) as i32) * (a.g * d as usize) as f64;
        assert!((sim.stats.max_queries as f64) <= bound);
    }
}

#[test]
fn jozsa_query_free_matches_reference() {
    for seed in 0..10 {
        let cfg = RandomJozsaConfig {
            n: 2,
            width: 12,
            blocks: 1 + seed as usize % 3,
            classical_depth: 2,
            quantum_depth: 3,
            style: QueryStyle::None,
            query_rate: 0.0,
            hadamard_rate: 0.4,
        };
        let j = random_jozsa(&cfg, seed);
        let t = tree(2, seed);
        let sim = jozsa_exact::<f64>(&j, &t).unwrap();
        let reference = run_jozsa_exact::<f64>(&j, &t).unwrap();
        assert!(sim.distribution.total_variation(&reference) < 1e-12);
        let run = jozsa_wrapper::<f64>(&j, &t, seed).unwrap();
        assert!(sim.distribution.prob(&run.output) > 0.0);
    }
}

#[test]
fn jozsa_truthful_is_exact() {
    for seed in 0..10 {
        let cfg = RandomJozsaConfig {
            n: 2,
            width: 16,
            blocks: 1 + seed as usize % 3,
            classical_depth: 2,
            quantum_depth: 3,
            style: QueryStyle::Truthful,
            query_rate: 0.7,
            hadamard_rate: 0.4,
        };
        let j = random_jozsa(&cfg, seed);
        let t = tree(2, 50 + seed);
        let sim = jozsa_exact::<f64>(&j, &t).unwrap();
        let reference = run_jozsa_exact::<f64>(&j, &t).unwrap();
        assert_eq!(sim.stats.max_outlier_mass, 0.0);
        assert!(sim.distribution.total_variation(&reference) < 1e-12);
    }
}
