use num_complex::Complex64;
use proptest::prelude::*;

use welded_core::bottleneck_sim::{bottleneck_wrapper, BottleneckConfig};
use welded_core::circuits::random::{random_hybrid, random_query_tier, QueryStyle, RandomCircuitConfig};
use welded_core::circuits::{parse, print, validate, Circuit, HybridKind};
use welded_core::hybrid_sim::{few_tier_wrapper, KnownVertices};
use welded_core::statevec::{apply_layer, PureState};
use welded_core::walk::{build_reduced, evolve_exit_probability};
use welded_core::welded_tree::{count_consistent, label_mask, replays, BlackBoxTree, Label, Oracle, TreeStructure};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn small_circuit(n: u32, seed: u64) -> welded_core::circuits::HybridCircuit {
    let style = [QueryStyle::Truthful, QueryStyle::Random, QueryStyle::Guess][(seed % 3) as usize];
    let mut cfg = RandomCircuitConfig::new(n, 10, 2, 2, style);
    if seed % 2 == 1 {
        cfg.kind = HybridKind::AllQuantum;
        cfg.width = 12;
    }
    random_hybrid(&cfg, seed)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn trees_satisfy_their_invariants(n in 2u32..=6, seed in any::<u64>()) {
        let t = BlackBoxTree::generate(n, seed).unwrap();
        prop_assert!(t.structure().check_invariants().is_ok());
        prop_assert!(t.coloring().check_invariants(t.structure()).is_ok());
        prop_assert!(t.check_invariants().is_ok());
    }

    #[test]
    fn queries_are_involutions_and_counted(n in 2u32..=6, seed in any::<u64>(), raw in prop::collection::vec((any::<u64>(), 0u8..16), 1..64)) {
        let t = BlackBoxTree::generate(n, seed).unwrap();
        let mut h = t.handle();
        for (i, &(x, c)) in raw.iter().enumerate() {
            let x = if i % 2 == 0 { t.labels()[x as usize % t.labels().len()] } else { Label(x & label_mask(n)) };
            let y = h.query(x, c);
            if y != t.invalid() {
                prop_assert_eq!(t.answer(y, c), x);
            }
        }
        prop_assert_eq!(h.queries(), raw.len() as u64);
    }

    #[test]
    fn one_new_label_divides_the_count(n in 2u32..=4, seed in any::<u64>(), steps in 0usize..4) {
        let t = BlackBoxTree::generate(n, seed).unwrap();
        let mut h = t.handle();
        let mut v = KnownVertices::entrance(&mut h);
        for _ in 0..steps {
            let before = count_consistent(&v).unwrap();
            let mut fixed = v.labels();
            fixed.insert(Label::ENTRANCE);
            let next = *v.frontier().iter().next().unwrap();
            v.expand(next, &mut h);
            let mut after = v.labels();
            after.insert(Label::ENTRANCE);
            let mut scaled = count_consistent(&v).unwrap();
            for i in 0..(after.len() - fixed.len()) as u64 {
                scaled *= label_mask(n) - fixed.len() as u64 - i;
            }
            prop_assert_eq!(scaled, before);
        }
    }

    #[test]
    fn circuit_text_round_trips(n in 2u32..=3, seed in any::<u64>()) {
        let c = Circuit::Hybrid(small_circuit(n, seed));
        let text = print(&c);
        let back = parse(&text).unwrap();
        prop_assert_eq!(print(&back), text);
        prop_assert_eq!(validate(&back), validate(&c));
        prop_assert!(validate(&c).is_empty());
    }

    #[test]
    fn layers_preserve_norm_and_act_linearly(seed in any::<u64>(), a in 0u128..1024, b in 0u128..1024) {
        let t = BlackBoxTree::generate(2, seed).unwrap();
        let tier = random_query_tier(2, 10, 3, seed);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mix = |s: &PureState, u: &PureState| -> PureState {
            let keys: std::collections::BTreeSet<u128> = s.iter().chain(u.iter()).map(|p| p.0).collect();
            PureState::from_amplitudes(10, keys.into_iter().map(|k| (k, s.amplitude(k) * r + u.amplitude(k) * Complex64::new(0.0, r)))).unwrap()
        };
        let (mut sa, mut sb) = (PureState::<f64>::basis(welded_core::statevec::Bits::new(a, 10)), PureState::<f64>::basis(welded_core::statevec::Bits::new(b, 10)));
        if a == b {
            return Ok(());
        }
        let mut sm = mix(&sa, &sb);
        for layer in &tier.layers {
            sa = apply_layer(&sa, layer, &t).unwrap();
            sb = apply_layer(&sb, layer, &t).unwrap();
            sm = apply_layer(&sm, layer, &t).unwrap();
            prop_assert!((sm.norm_sqr() - 1.0).abs() < 1e-9);
            let want = mix(&sa, &sb);
            for (k, amp) in want.iter().chain(sm.iter()) {
                prop_assert!((sm.amplitude(k) - want.amplitude(k)).norm() < 1e-12, "{k} {amp}");
            }
        }
    }

    #[test]
    fn simulator_dictionaries_are_truthful_and_runs_repeat(n in 2u32..=3, seed in any::<u64>()) {
        let t = BlackBoxTree::generate(n, seed ^ 1).unwrap();
        let c = small_circuit(n, seed);
        let run = few_tier_wrapper::<f64>(&c, &t, c.tiers.len(), seed).unwrap();
        prop_assert!(replays(&run.known, &t));
        let again = few_tier_wrapper::<f64>(&c, &t, c.tiers.len(), seed).unwrap();
        prop_assert_eq!(run.transcript.to_json(), again.transcript.to_json());
    }

    #[test]
    fn merge_is_idempotent_and_commutative(n in 2u32..=4, seed in any::<u64>(), picks in prop::collection::vec(any::<usize>(), 1..6)) {
        let t = BlackBoxTree::generate(n, seed).unwrap();
        let mut h = t.handle();
        let base = KnownVertices::entrance(&mut h);
        let (mut a, mut b) = (base.clone(), base.clone());
        for (i, p) in picks.iter().enumerate() {
            let target = if i % 2 == 0 { &mut a } else { &mut b };
            let f: Vec<Label> = target.frontier().into_iter().collect();
            target.expand(f[p % f.len()], &mut h);
        }
        let ab = a.merged(&b);
        prop_assert_eq!(&ab, &b.merged(&a));
        prop_assert_eq!(&ab.merged(&ab), &ab);
        prop_assert_eq!(&ab.merged(&a), &ab);
        prop_assert!(a.is_subset_of(&ab) && b.is_subset_of(&ab));
    }

    #[test]
    fn bottleneck_runs_keep_the_subset_chain(seed in any::<u64>()) {
        let n = 2;
        let t = BlackBoxTree::generate(n, seed).unwrap();
        let c = small_circuit(n, seed);
        let cfg = BottleneckConfig { samples: 8, budget: 32, fresh_candidates: 4, ..BottleneckConfig::for_height(n) };
        let run = bottleneck_wrapper::<f64>(&c, &t, c.tiers.len(), seed, &cfg).unwrap();
        prop_assert!(run.calls.iter().all(|k| k.aborts == 1 || k.subset_chain));
        prop_assert!(run.known.is_subset_of(&run.hist));
        prop_assert!(replays(&run.hist, &t));
    }

    #[test]
    fn walk_probabilities_stay_in_range(n in 1u32..=10, seed in any::<u64>(), t in 0.0f64..500.0) {
        let rw = build_reduced(&TreeStructure::generate(n, seed).unwrap());
        let p = evolve_exit_probability(&rw, t);
        prop_assert!((0.0..=1.0).contains(&p));
        let total: f64 = rw.evolve(t).iter().map(|(a, b)| a * a + b * b).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}
