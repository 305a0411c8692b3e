//! Core algorithms against the brute-force oracles in the testkit.

use welded_core::circuits::random::{random_query_free_tier, random_query_tier};
use welded_core::hybrid_sim::KnownVertices;
use welded_core::rng::{rng_from_seed, uniform_u64};
use welded_core::statevec::{apply_layer_with, Bits, PureState};
use welded_core::tolerance::Tolerances;
use welded_core::welded_tree::{count_consistent, BlackBoxTree, Label};
use welded_testkit::{brute_count_labelings, estimator_agreement, run_layers, SyntheticOracle};

fn max_error(sparse: &PureState<f64>, dense: &[num_complex::Complex64]) -> f64 {
    dense
        .iter()
        .enumerate()
        .map(|(k, d)| (sparse.amplitude(k as u128) - d).norm())
        .fold(0.0, f64::max)
}

#[test]
fn sparse_executor_matches_dense_matrices() {
    let tol = Tolerances::F64;
    for seed in 0..30u64 {
        let (tier, width, oracle) = if seed % 2 == 0 {
            (random_query_free_tier(10, 4, seed), 10, None)
        } else {
            (random_query_tier(1, 10, 4, seed), 10, Some(SyntheticOracle::random(1, seed)))
        };
        let input = uniform_u64(&mut rng_from_seed(seed), 0, 1 << width) as u128;
        let mut answer = |x: Label, c: u8| oracle.as_ref().map_or(Label(0), |o| o.answer(x, c));
        let dense = run_layers(&tier, input, width, &mut answer);
        let mut state = PureState::<f64>::basis(Bits::new(input, width));
        for (layer, d) in tier.layers.iter().zip(&dense) {
            state = apply_layer_with(&state, layer, &tol, &mut answer).unwrap();
            assert!(max_error(&state, d) <= 1e-10, "seed {seed}");
            assert!((state.norm_sqr() - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn counting_matches_brute_force() {
    let t = BlackBoxTree::generate(2, 17).unwrap();
    let mut h = t.handle();
    let mut v = KnownVertices::entrance(&mut h);
    let mut checked = 0;
    for _ in 0..6 {
        let next = *v.frontier().iter().next().unwrap();
        v.expand(next, &mut h);
        if let Some(brute) = brute_count_labelings(&v, &t, 2_000_000) {
            let formula = count_consistent(&v).unwrap();
            assert_eq!(formula, brute.into(), "{} keys", v.size());
            checked += 1;
        }
    }
    assert!(checked >= 2);
}

#[test]
fn estimators_match_enumeration_at_height_two() {
    let a = estimator_agreement(24, 600);
    assert!(a.failures.is_empty(), "{:?}", a.failures);
    assert!(a.compared >= 16 && a.nontrivial >= 10, "{a:?}");
}
