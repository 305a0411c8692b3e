use welded_core::bottleneck_sim::{
    bottleneck_tier_sim, bottleneck_wrapper, check_ceilings, fidelity_gap_check, BottleneckConfig, BottleneckReport,
    Ensemble, SeedTape, Threshold,
};
use welded_core::circuits::random::{random_hybrid, QueryStyle, RandomCircuitConfig};
use welded_core::circuits::{Gate, HybridCircuit, HybridKind, Layer, QueryWires, Tier};
use welded_core::hybrid_sim::{few_tier_wrapper, KnownVertices};
use welded_core::statevec::Bits;
use welded_core::welded_tree::{replays, BlackBoxTree};

fn tree(n: u32, seed: u64) -> BlackBoxTree {
    BlackBoxTree::generate(n, seed).unwrap()
}

fn circuit(n: u32, width: usize, tiers: usize, style: QueryStyle, seed: u64) -> HybridCircuit {
    random_hybrid(&RandomCircuitConfig::new(n, width, tiers, 3, style), seed)
}

fn small_budget(n: u32) -> BottleneckConfig {
    BottleneckConfig {
        samples: 12,
        budget: 48,
        fresh_candidates: 4,
        ..BottleneckConfig::for_height(n)
    }
}

#[test]
fn disabled_matches_few_tier_transcripts() {
    for seed in 0..20u64 {
        let n = 2 + (seed % 2) as u32;
        let style = [QueryStyle::Random, QueryStyle::Truthful, QueryStyle::Guess][seed as usize % 3];
        let c = circuit(n, if n == 2 { 12 } else { 16 }, 1 + seed as usize % 4, style, seed);
        let t = tree(n, 40 + seed);
        let few = few_tier_wrapper::<f64>(&c, &t, c.tiers.len(), seed).unwrap();
        let b = bottleneck_wrapper::<f64>(&c, &t, c.tiers.len(), seed, &BottleneckConfig::disabled()).unwrap();
        assert!(!b.aborted);
        assert_eq!(b.transcript, few.transcript, "seed {seed}");
        assert_eq!(b.transcript.to_json(), few.transcript.to_json());
        assert_eq!(b.known, few.known);
        assert_eq!(b.hist, few.known);
    }
}

#[test]
fn zero_tiers_is_the_base_case() {
    let t = tree(2, 3);
    let c = circuit(2, 12, 2, QueryStyle::Random, 3);
    let run = bottleneck_wrapper::<f64>(&c, &t, 0, 1, &BottleneckConfig::for_height(2)).unwrap();
    let entrance = KnownVertices::entrance(&mut t.handle());
    assert_eq!(run.output, Bits::zeros(c.input_width()));
    assert_eq!(run.known, entrance);
    assert_eq!(run.hist, entrance);
    assert!(run.calls.is_empty());
}

#[test]
fn invariants_hold_on_every_call() {
    for seed in 0..12u64 {
        let n = 2 + (seed % 2) as u32;
        let style = [QueryStyle::Random, QueryStyle::Truthful][seed as usize % 2];
        let c = circuit(n, if n == 2 { 12 } else { 16 }, 1 + seed as usize % 3, style, seed);
        let t = tree(n, 70 + seed);
        let mut cfg = small_budget(n);
        if seed % 3 == 0 {
            cfg.ensemble = Ensemble::LabelsOnly;
        }
        let run = bottleneck_wrapper::<f64>(&c, &t, c.tiers.len(), seed, &cfg).unwrap();
        let tape = SeedTape::for_circuit(&c, seed);
        let check = check_ceilings(&c, tape.bits, &run);
        assert!(check.loop_ok && check.size_ok && check.subset_chain_ok, "seed {seed}: {check:?}");
        assert!(replays(&run.hist, &t));
        assert!(run.known.is_subset_of(&run.hist));
        for call in run.calls.iter().filter(|c| c.aborts == 0) {
            let v = call.returned.as_ref().unwrap();
            assert!(v.is_entrance_rooted());
            assert_eq!(v.size(), call.v_returned);
        }
        let report = BottleneckReport::new(&c, tape.bits, &run);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in ["tier", "layer", "aborts", "loop_iterations", "v_current", "v_hist", "estimates"] {
            assert!(json["calls"][0].get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn runs_are_prefix_deterministic() {
    let n = 2;
    let c = circuit(n, 12, 3, QueryStyle::Truthful, 9);
    let t = tree(n, 9);
    let cfg = small_budget(n);
    let full = bottleneck_wrapper::<f64>(&c, &t, 3, 5, &cfg).unwrap();
    let again = bottleneck_wrapper::<f64>(&c, &t, 3, 5, &cfg).unwrap();
    assert_eq!(full, again);
    let prefix = bottleneck_wrapper::<f64>(&c, &t, 2, 5, &cfg).unwrap();
    if full.abort_tier.is_none_or(|j| j >= 2) {
        let calls = prefix.calls.len();
        assert_eq!(prefix.calls[..], full.calls[..calls]);
        assert_eq!(prefix.hist_sizes[..], full.hist_sizes[..prefix.hist_sizes.len()]);
    }
}

#[test]
fn nonzero_start_aborts_at_tier_zero() {
    let n = 2;
    let c = circuit(n, 12, 2, QueryStyle::Random, 2);
    let t = tree(n, 2);
    let hist = KnownVertices::entrance(&mut t.handle());
    let x = Bits::new(1, c.input_width());
    let (out, calls) = bottleneck_tier_sim::<f64>(&c, 0, x, &hist, &t, 1, &small_budget(n)).unwrap();
    assert!(out.is_none());
    assert_eq!(calls[0].aborts, 1);
}

#[test]
fn tight_thresholds_exercise_aborts() {
    let n = 3;
    let mut aborted = 0;
    for seed in 0..6u64 {
        let c = circuit(n, 16, 3, QueryStyle::Random, seed);
        let t = tree(n, seed);
        let cfg = BottleneckConfig {
            tau: Threshold::Value(0.05),
            rho_log2: Some(0.0),
            ..small_budget(n)
        };
        let run = bottleneck_wrapper::<f64>(&c, &t, 3, seed, &cfg).unwrap();
        if run.aborted {
            aborted += 1;
            assert_eq!(run.output.len(), 2 * n as usize);
            assert!(run.transcript.aborted);
        }
    }
    assert!(aborted > 0);
}

#[test]
fn identity_layer_echoes_input() {
    let n = 2;
    let c = HybridCircuit::new(n, 12, HybridKind::AllQuantum, vec![Tier::quantum(2, vec![Layer::grow(2, 12)])]);
    let t = tree(n, 1);
    let hist = KnownVertices::entrance(&mut t.handle());
    let x = Bits::zeros(c.input_width());
    let (out, _) = bottleneck_tier_sim::<f64>(&c, 0, x, &hist, &t, 4, &small_budget(n)).unwrap();
    assert_eq!(out.unwrap().0, x.resized(12));
}

/// One quantum tier at n = 2 that queries the exit label with a color in
/// uniform superposition. The exit has two neighbours, so two of the
/// sixteen color codes give outliers.
fn exit_guess(t: &BlackBoxTree) -> HybridCircuit {
    let n = 2;
    let exit = t.exit_label().0;
    let mut load: Vec<Gate> = (0..4).filter(|j| (exit >> j) & 1 == 1).map(Gate::Not).collect();
    load.extend((4..8).map(Gate::Hadamard));
    let tier = Tier::quantum(
        2,
        vec![
            Layer::grow(2, 12),
            Layer::square(12, load),
            Layer::square(12, vec![Gate::Query(QueryWires::contiguous(n, 0))]),
        ],
    );
    HybridCircuit::new(n, 12, HybridKind::AllQuantum, vec![tier])
}

#[test]
fn fidelity_gaps_respect_the_triangle_inequality() {
    let n = 2;
    let x = Bits::zeros(n as usize);
    for seed in 0..10u64 {
        let t = tree(n, seed);
        let hist = KnownVertices::entrance(&mut t.handle());

        let c = exit_guess(&t);
        let r = fidelity_gap_check::<f64>(&c, &t, 0, x, &hist, seed, &small_budget(n)).unwrap();
        assert!(!r.aborted);
        assert!(r.triangle_holds(1e-9), "seed {seed}: {r:?}");
        let last = r.layers.last().unwrap();
        assert!((last.outlier_mass - 2.0 / 16.0).abs() < 1e-12, "{r:?}");
        assert!(last.global > 0.0 && last.global <= last.local + 1e-12);

        for style in [QueryStyle::Random, QueryStyle::Guess] {
            let mut cfg = RandomCircuitConfig::new(n, 12, 1, 3, style);
            cfg.kind = HybridKind::AllQuantum;
            let c = random_hybrid(&cfg, seed);
            let r = fidelity_gap_check::<f64>(&c, &t, 0, x, &hist, seed, &small_budget(n)).unwrap();
            assert!(r.triangle_holds(1e-9), "seed {seed}: {r:?}");
            for g in r.layers.iter().filter(|g| g.clean) {
                assert!((g.local * g.local - 2.0 * g.outlier_mass).abs() < 1e-9);
            }
        }

        let mut cfg = RandomCircuitConfig::new(n, 12, 1, 3, QueryStyle::None);
        cfg.kind = HybridKind::AllQuantum;
        let r = fidelity_gap_check::<f64>(&random_hybrid(&cfg, seed), &t, 0, x, &hist, seed, &small_budget(n)).unwrap();
        assert!(r.max_global() < 1e-9);
    }
}
