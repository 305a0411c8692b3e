//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Tolerances are fixed here and nowhere else.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;
use welded_core::bottleneck_sim::{bottleneck_wrapper, check_ceilings, BottleneckConfig, SeedTape};
use welded_core::circuits::random::{
    random_hybrid, random_jozsa, random_query_free_tier, random_query_tier, QueryStyle, RandomCircuitConfig,
    RandomJozsaConfig,
};
use welded_core::circuits::{accounting, Circuit, HybridKind};
use welded_core::hybrid_sim::{
    compare_to_reference, few_tier_exact, few_tier_query_ceiling, few_tier_wrapper, jozsa_exact, jozsa_query_ceiling,
    jozsa_wrapper,
};
use welded_core::rng::{derive_seed, rng_from_seed, uniform_u64};
use welded_core::statevec::{apply_layer_with, run_jozsa_exact, Bits, PureState};
use welded_core::tolerance::Tolerances;
use welded_core::walk::{build_reduced, evolve_exit_probability, full_graph_evolve, sweep, walker_success_rate};
use welded_core::welded_tree::{generate_coloring, generate_structure, label_mask, replays, BlackBoxTree, Label};
use welded_harness::commands::{discovery_bound, discovery_counts, tv_envelope, walker_budget};
use welded_testkit::{estimator_agreement, guess_circuit, run_layers, SyntheticOracle};

const SEED: u64 = 20_240_601;
const DENSE_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 1e-9;
const WALK_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-10;
const EXACT_TV_TOL: f64 = 1e-12;
const WALKER_CEILING: f64 = 1e-3;
const SEPARATION: f64 = 10.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn oracle_correctness() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut queries = 0u64;
    for n in 1..=6u32 {
        for k in 0..1000u64 {
            let seed = derive_seed(SEED, (n as u64) << 20 | k);
            if n == 1 {
                let s = generate_structure(n, seed).unwrap();
                let c = generate_coloring(&s, derive_seed(seed, 1)).unwrap();
                if let Err(e) = s.check_invariants().and_then(|_| c.check_invariants(&s)) {
                    failures.push(format!("n={n} seed {seed}: {e}"));
                }
                continue;
            }
            let t = BlackBoxTree::generate(n, seed).unwrap();
            let checked = t
                .structure()
                .check_invariants()
                .and_then(|_| t.coloring().check_invariants(t.structure()))
                .and_then(|_| t.check_invariants());
            if let Err(e) = checked {
                failures.push(format!("n={n} seed {seed}: {e}"));
            }
        }
        if n == 1 {
            continue;
        }
        let t = BlackBoxTree::generate(n, derive_seed(SEED, n as u64)).unwrap();
        let mut rng = rng_from_seed(derive_seed(SEED, 100 + n as u64));
        for i in 0..10_000 {
            let x = if i % 2 == 0 {
                t.labels()[rng.random_range(0..t.labels().len())]
            } else {
                Label(uniform_u64(&mut rng, 0, label_mask(n) + 1))
            };
            let c = rng.random_range(0..16u8);
            let y = t.answer(x, c);
            queries += 1;
            if y != t.invalid() && t.answer(y, c) != x {
                failures.push(format!("n={n}: query ({x:?}, {c}) is not an involution"));
            }
        }
    }
    let took = start.elapsed();
    let pass = failures.is_empty() && took < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "6000 trees, {queries} queries, {} failures, {:.1} s (limit 30 s){}",
            failures.len(),
            secs(took),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn discovery_envelope() -> Outcome {
    let queries = [1u32, 4, 16];
    let trials = 100_000u64;
    let mut worst = f64::NEG_INFINITY;
    let mut lines = Vec::new();
    let mut pass = discovery_bound(3, 1) == 30.0 / 64.0;
    for n in 3..=5u32 {
        let counts = discovery_counts(n, &queries, trials, derive_seed(SEED, n as u64)).unwrap();
        for (&h, &k) in queries.iter().zip(&counts) {
            let rate = k as f64 / trials as f64;
            let bound = discovery_bound(n, h);
            let p = bound.min(1.0);
            let sigma = (p * (1.0 - p) / trials as f64).sqrt().max((rate * (1.0 - rate) / trials as f64).sqrt());
            let z = if sigma > 0.0 { (rate - bound) / sigma } else { 0.0 };
            worst = worst.max(z);
            pass &= rate <= bound + 3.0 * sigma;
            lines.push(format!("n{n}h{h} {rate:.4}/{bound:.4}"));
        }
    }
    outcome(
        pass,
        format!(
            "bound(3,1) = {} (30/64 = {}); worst (rate - bound)/sigma {worst:.2}; {}",
            discovery_bound(3, 1),
            30.0 / 64.0,
            lines.join(" ")
        ),
    )
}

fn executor_exactness() -> Outcome {
    let tol = Tolerances::F64;
    let width = 10;
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    for seed in 0..50u64 {
        let s = derive_seed(SEED, seed);
        let (tier, oracle) = if seed % 2 == 0 {
            (random_query_free_tier(width, 4, s), None)
        } else {
            (random_query_tier(1, width, 4, s), Some(SyntheticOracle::random(1, s)))
        };
        let input = uniform_u64(&mut rng_from_seed(s), 0, 1 << width) as u128;
        let mut answer = |x: Label, c: u8| oracle.as_ref().map_or(Label(0), |o| o.answer(x, c));
        let dense = run_layers(&tier, input, width, &mut answer);
        let mut state = PureState::<f64>::basis(Bits::new(input, width));
        for (layer, d) in tier.layers.iter().zip(&dense) {
            let before = state.norm_sqr();
            state = apply_layer_with(&state, layer, &tol, &mut answer).unwrap();
            drift = drift.max((state.norm_sqr() - before).abs());
            for (k, a) in d.iter().enumerate() {
                worst = worst.max((state.amplitude(k as u128) - a).norm());
            }
        }
    }
    outcome(
        worst <= DENSE_TOL && drift <= DRIFT_TOL,
        format!("50 circuits at width {width}: max error {worst:.2e} (<= {DENSE_TOL:e}), drift {drift:.2e} (<= {DRIFT_TOL:e})"),
    )
}

fn walk_cross_check() -> Outcome {
    let mut rng = rng_from_seed(derive_seed(SEED, 4));
    let mut gap = 0.0f64;
    let mut norm = 0.0f64;
    for k in 0..20u64 {
        let n = 1 + (k % 5) as u32;
        let s = welded_core::welded_tree::TreeStructure::generate(n, derive_seed(SEED, 40 + k)).unwrap();
        let t = rng.random_range(0.0..4.0 * n as f64 + 4.0);
        let full = full_graph_evolve(&s, t).unwrap();
        let rw = build_reduced(&s);
        gap = gap.max((full.exit - evolve_exit_probability(&rw, t)).abs());
        let reduced: f64 = rw.evolve(t).iter().map(|(a, b)| a * a + b * b).sum();
        norm = norm.max((full.total - 1.0).abs()).max((reduced - 1.0).abs());
    }
    let start = Instant::now();
    let sw = sweep(4, 40.0, 2000, SEED).unwrap();
    let took = start.elapsed();
    let pass = gap <= WALK_TOL && norm <= WALK_TOL && took < Duration::from_secs(10) && sw.curve.len() == 2000;
    outcome(
        pass,
        format!(
            "20 pairs: max gap {gap:.2e}, norm drift {norm:.2e} (<= {WALK_TOL:e}); n=4 sweep {:.2} s (limit 10 s), best p {:.4}",
            secs(took),
            sw.best_p
        ),
    )
}

fn separation_snapshot() -> Outcome {
    let n = 9;
    let budget = walker_budget(n);
    let w = walker_success_rate(n, budget, 10_000, derive_seed(SEED, 5)).unwrap();
    let sw = sweep(n, 10.0 * n as f64, 2000, derive_seed(SEED, 6)).unwrap();
    let floor = w.rate.mean.max(WALKER_CEILING);
    let sigma = (WALKER_CEILING * (1.0 - WALKER_CEILING) / w.trials as f64).sqrt();
    let walker_ok = w.rate.mean <= WALKER_CEILING + 3.0 * sigma;
    let walk_ok = sw.best_p > SEPARATION * floor;
    outcome(
        walker_ok && walk_ok,
        format!(
            "walker budget {budget}: {}/{} successes (rate {:.1e} <= {WALKER_CEILING:e}); walk best p {:.4} at t {:.2} > {SEPARATION} x {floor:e}",
            w.successes, w.trials, w.rate.mean, sw.best_p, sw.best_t
        ),
    )
}

fn random_circuit(n: u32, seed: u64) -> welded_core::circuits::HybridCircuit {
    let mut rng = rng_from_seed(seed);
    let style = [QueryStyle::Random, QueryStyle::Truthful, QueryStyle::Guess][rng.random_range(0..3)];
    let width = if n == 2 { 12 } else { 16 };
    let mut cfg = RandomCircuitConfig::new(n, width, rng.random_range(1..=4), rng.random_range(1..=3), style);
    if rng.random_bool(0.5) {
        cfg.kind = HybridKind::AllQuantum;
    }
    random_hybrid(&cfg, seed)
}

fn structural_ceilings() -> Outcome {
    let mut growth = 0.0f64;
    let mut violations = 0;
    let mut gap = 0.0f64;
    let mut ratio = 0.0f64;
    let mut over = 0;
    for k in 0..100u64 {
        let n = 2 + (k % 2) as u32;
        let s = derive_seed(SEED, 600 + k);
        let c = random_circuit(n, s);
        let t = BlackBoxTree::generate(n, derive_seed(s, 1)).unwrap();
        let st = few_tier_exact::<f64>(&c, &t).unwrap().stats;
        growth = growth.max(st.max_growth);
        violations += st.tier_violations;
        gap = gap.max(st.max_identity_gap);
        let ceiling = few_tier_query_ceiling(&c);
        ratio = ratio.max(st.max_queries as f64 / ceiling as f64);
        let run = few_tier_wrapper::<f64>(&c, &t, c.tiers.len(), derive_seed(s, 2)).unwrap();
        if st.max_queries as u128 > ceiling || run.transcript.queries as u128 > ceiling {
            over += 1;
        }
    }
    outcome(
        growth <= 4.0 && violations == 0 && over == 0 && gap <= IDENTITY_TOL,
        format!(
            "100 circuits: max growth {growth:.2} (<= 4), tier ceiling violations {violations}, wrapper over ceiling {over} (worst ratio {ratio:.2e}), identity gap {gap:.2e} (<= {IDENTITY_TOL:e})"
        ),
    )
}

fn faithfulness() -> Outcome {
    let start = Instant::now();
    let mut exact_tv = 0.0f64;
    let mut exact_outliers = 0.0f64;
    for k in 0..30u64 {
        let s = derive_seed(SEED, 700 + k);
        let n = 2 + (k % 2) as u32;
        let c = if k % 3 == 2 {
            Circuit::Jozsa(random_jozsa(
                &RandomJozsaConfig {
                    n: 2,
                    width: 16,
                    blocks: 1 + k as usize % 3,
                    classical_depth: 2,
                    quantum_depth: 3,
                    style: QueryStyle::Truthful,
                    query_rate: 0.7,
                    hadamard_rate: 0.4,
                },
                s,
            ))
        } else {
            let mut cfg = RandomCircuitConfig::new(n, if n == 2 { 12 } else { 16 }, 1 + k as usize % 4, 3, QueryStyle::Truthful);
            if k % 2 == 0 {
                cfg.kind = HybridKind::AllQuantum;
            }
            Circuit::Hybrid(random_hybrid(&cfg, s))
        };
        let t = BlackBoxTree::generate(c.n(), derive_seed(s, 1)).unwrap();
        let cmp = compare_to_reference::<f64>(&c, &t, 20, derive_seed(s, 2)).unwrap();
        exact_tv = exact_tv.max(cmp.max_tv);
        exact_outliers = exact_outliers.max(cmp.max_outlier_mass);
    }
    let mut guess = Vec::new();
    let mut guess_ok = true;
    let mut hit = 0.0f64;
    for (k, (n, guesses, superpose)) in [(3u32, 1, false), (3, 2, true), (4, 1, false), (4, 2, false), (4, 1, true)]
        .into_iter()
        .enumerate()
    {
        let s = derive_seed(SEED, 750 + k as u64);
        let c = Circuit::Hybrid(guess_circuit(n, guesses, superpose, s));
        let q = accounting(&c).unwrap().query_gates;
        let t = BlackBoxTree::generate(n, derive_seed(s, 1)).unwrap();
        let cmp = compare_to_reference::<f64>(&c, &t, 1000, derive_seed(s, 2)).unwrap();
        let bound = tv_envelope(n, q);
        hit = hit.max(cmp.tv.mean);
        guess_ok &= cmp.tv.mean <= bound + 3.0 * cmp.tv.stderr;
        guess.push(format!("n{n} q{q}{} tv {:.3}+-{:.3} <= {bound:.3}", if superpose { "h" } else { "" }, cmp.tv.mean, cmp.tv.stderr));
    }
    guess_ok &= hit > 0.0;
    outcome(
        exact_tv <= EXACT_TV_TOL && exact_outliers == 0.0 && guess_ok,
        format!(
            "truthful: max TV {exact_tv:.1e}, outlier mass {exact_outliers}; guess over 1000 labelings: {}; {:.1} s",
            guess.join(", "),
            secs(start.elapsed())
        ),
    )
}

fn jozsa_path() -> Outcome {
    let mut over = 0;
    let mut ratio = 0.0f64;
    let mut queries = 0u64;
    for k in 0..50u64 {
        let s = derive_seed(SEED, 800 + k);
        let n = 2 + (k % 2) as u32;
        let style = [QueryStyle::Random, QueryStyle::Truthful, QueryStyle::Guess][k as usize % 3];
        let j = random_jozsa(
            &RandomJozsaConfig {
                n,
                width: 24,
                blocks: 1 + k as usize % 3,
                classical_depth: 2 + k as usize % 2,
                quantum_depth: 1 + k as usize % 3,
                style,
                query_rate: 0.6,
                hadamard_rate: 0.35,
            },
            s,
        );
        let t = BlackBoxTree::generate(n, derive_seed(s, 1)).unwrap();
        let run = jozsa_wrapper::<f64>(&j, &t, derive_seed(s, 2)).unwrap();
        let ceiling = jozsa_query_ceiling(&j);
        queries = queries.max(run.transcript.queries);
        ratio = ratio.max(run.transcript.queries as f64 / ceiling as f64);
        if run.transcript.queries as u128 > ceiling {
            over += 1;
        }
    }
    let mut tv = 0.0f64;
    for k in 0..20u64 {
        let s = derive_seed(SEED, 850 + k);
        let j = random_jozsa(
            &RandomJozsaConfig {
                n: 2,
                width: 12,
                blocks: 1 + k as usize % 3,
                classical_depth: 2,
                quantum_depth: 3,
                style: QueryStyle::None,
                query_rate: 0.0,
                hadamard_rate: 0.4,
            },
            s,
        );
        let t = BlackBoxTree::generate(2, derive_seed(s, 1)).unwrap();
        let sim = jozsa_exact::<f64>(&j, &t).unwrap();
        tv = tv.max(sim.distribution.total_variation(&run_jozsa_exact::<f64>(&j, &t).unwrap()));
    }
    outcome(
        over == 0 && tv <= EXACT_TV_TOL,
        format!(
            "50 circuits at width 24: {over} over ceiling (most queries {queries}, worst ratio {ratio:.2e}); 20 query-free: max TV {tv:.1e}"
        ),
    )
}

fn bottleneck() -> Outcome {
    let mut bad = Vec::new();
    let mut calls = 0;
    let mut aborts = 0;
    for k in 0..200u64 {
        let n = 2 + (k % 2) as u32;
        let s = derive_seed(SEED, 900 + k);
        let c = random_circuit(n, s);
        let t = BlackBoxTree::generate(n, derive_seed(s, 1)).unwrap();
        let cfg = BottleneckConfig {
            samples: 16,
            budget: 64,
            fresh_candidates: 4,
            ..BottleneckConfig::for_height(n)
        };
        let seed = derive_seed(s, 2);
        let run = bottleneck_wrapper::<f64>(&c, &t, c.tiers.len(), seed, &cfg).unwrap();
        let check = check_ceilings(&c, SeedTape::for_circuit(&c, seed).bits, &run);
        let rooted = run
            .calls
            .iter()
            .filter(|c| c.aborts == 0)
            .all(|c| c.returned.as_ref().is_some_and(|v| v.is_entrance_rooted() && v.size() == c.v_returned));
        let subtree = replays(&run.hist, &t) && run.known.is_subset_of(&run.hist);
        calls += run.calls.len();
        aborts += run.aborted as usize;
        if !(check.loop_ok && check.size_ok && check.subset_chain_ok && rooted && subtree) {
            bad.push(k);
        }
    }
    let mut differ = 0;
    for k in 0..20u64 {
        let n = 2 + (k % 2) as u32;
        let s = derive_seed(SEED, 1100 + k);
        let c = random_circuit(n, s);
        let t = BlackBoxTree::generate(n, derive_seed(s, 1)).unwrap();
        let few = few_tier_wrapper::<f64>(&c, &t, c.tiers.len(), s).unwrap();
        let off = bottleneck_wrapper::<f64>(&c, &t, c.tiers.len(), s, &BottleneckConfig::disabled()).unwrap();
        if off.transcript.to_json() != few.transcript.to_json() {
            differ += 1;
        }
    }
    let agree = estimator_agreement(24, 600);
    let agree_ok = agree.failures.is_empty() && agree.compared >= 16 && agree.nontrivial >= 10;
    outcome(
        bad.is_empty() && differ == 0 && agree_ok,
        format!(
            "200 runs, {calls} calls, {aborts} aborted runs, {} with a broken invariant; tau=0 transcripts differ on {differ}/20; \
             enumeration: {} estimates over {} cases ({} nontrivial), worst z {:.2}, {} beyond 3 sigma",
            bad.len(),
            agree.estimates,
            agree.compared,
            agree.nontrivial,
            agree.worst_z,
            agree.failures.len()
        ),
    )
}

const SMALL_CONFIG: &str = r#"{
  "seed": 11,
  "walk": { "heights": [3, 4], "steps": 200, "walker_trials": 200, "cross_checks": 2 },
  "discovery": { "heights": [3], "queries": [0, 1, 4], "trials": 2000 },
  "simulate": {
    "labelings": 5,
    "family": { "kind": "hybrid", "style": "random", "count": 3 },
    "bottleneck": { "samples": 8, "budget": 32 }
  },
  "e2e": { "walker_height": 6, "walker_trials": 200, "walk_heights": [3] }
}"#;

fn run_cli(dir: &Path, config: &Path, command: &str, jobs: &str, tag: &str) -> Result<Vec<(String, Vec<u8>)>, String> {
    let out = dir.join(format!("{command}-{tag}.json"));
    let status = Command::new(env!("CARGO_BIN_EXE_welded"))
        .arg(command)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(&out)
        .arg("--jobs")
        .arg(jobs)
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.code() == Some(2) {
        return Err(format!("{command}: {}", String::from_utf8_lossy(&status.stderr)));
    }
    let prefix = format!("{command}-{tag}.");
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().to_string_lossy().into_owned();
            let rest = name.strip_prefix(&prefix)?.to_owned();
            Some((rest, std::fs::read(e.path()).ok()?))
        })
        .collect();
    files.sort();
    Ok(files)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, SMALL_CONFIG).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;
    for command in ["walk", "discovery", "simulate", "e2e"] {
        let a = run_cli(dir.path(), &config, command, "1", "a");
        let b = run_cli(dir.path(), &config, command, "3", "b");
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let same = !a.is_empty() && a == b;
                pass &= same;
                let bytes: usize = a.iter().map(|f| f.1.len()).sum();
                lines.push(format!("{command} {} files {bytes} B {}", a.len(), if same { "identical" } else { "DIFFER" }));
            }
            (Err(e), _) | (_, Err(e)) => {
                pass = false;
                lines.push(format!("{command} failed: {e}"));
            }
        }
    }
    outcome(pass, format!("jobs 1 vs 3: {}", lines.join("; ")))
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle correctness", oracle_correctness),
        ("discovery envelope", discovery_envelope),
        ("executor exactness", executor_exactness),
        ("walk cross-check", walk_cross_check),
        ("separation snapshot", separation_snapshot),
        ("few-tier structural ceilings", structural_ceilings),
        ("simulator faithfulness", faithfulness),
        ("jozsa path", jozsa_path),
        ("bottleneck", bottleneck),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        failed += !o.pass as usize;
        println!(
            "criterion {:>2} {name}: {} [{:.1} s] {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            secs(start.elapsed()),
            o.detail
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
