//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test --release -p banditree-core --test acceptance`.

mod common;

use std::time::Instant;

use banditree::complexity::{
    classification_coefficient, dec_coefficient, elimination_set, hellinger_separation_level, optimal_tree_depth, randomized_coefficient,
    test_hellinger_sq, DecInstance,
};
use banditree::ece::{run_ece, EceConfig, SampleMode};
use banditree::envsim::{make_rand, BanditInstance, ContextDistribution, Noise};
use banditree::game::SolverConfig;
use banditree::harness::{run_experiment, run_trial, Algo, Bench, ExperimentConfig, Trial};
use banditree::metatrain::{depth_ratio, meta_train, n_est_formula, MetaTrainConfig};
use banditree::{BanditCollection, HypothesisSet, SimRng, TestClass};
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

const HORIZON: usize = 10_000;
const RUNS: usize = 20;

fn bench_for(coll: BanditCollection, env: &str, algos: Vec<Algo>, horizon: usize) -> (Bench, ExperimentConfig) {
    let mut cfg = ExperimentConfig::new(format!("{env}.json"), algos, horizon);
    cfg.runs = RUNS;
    cfg.seed = 2024;
    let bench = Bench::prepare(coll, env.into(), &cfg).unwrap();
    (bench, cfg)
}

fn trials(bench: &Bench, cfg: &ExperimentConfig, algo: Algo) -> Vec<Trial> {
    let jobs: Vec<(usize, usize)> = (0..bench.coll.num_tasks())
        .flat_map(|t| (0..cfg.runs).map(move |r| (t, r)))
        .collect();
    jobs.par_iter()
        .map(|&(t, r)| run_trial(bench, algo, t, r, cfg.seed).unwrap())
        .collect()
}

/// `max_task mean_run regret(step)`.
fn worst_case_at(trials: &[Trial], num_tasks: usize, step: usize) -> f64 {
    (0..num_tasks)
        .map(|task| {
            let vals: Vec<f64> = trials.iter().filter(|t| t.trace.task == task).map(|t| t.trace.at(step)).collect();
            vals.iter().sum::<f64>() / vals.len() as f64
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_1() -> Verdict {
    let (bench, cfg) = bench_for(common::rand_40_40(), "rand-40-40", vec![Algo::Dtece], HORIZON);
    let ts = trials(&bench, &cfg, Algo::Dtece);
    let mean = ts.iter().map(|t| t.classification_pulls as f64).sum::<f64>() / ts.len() as f64;
    let depth = bench.plan.as_ref().unwrap().tree.depth();
    verdict(
        mean <= 1500.0,
        format!("mean classification pulls {mean:.1} <= 1500 (tree depth {depth}, {} trials)", ts.len()),
    )
}

fn criterion_2() -> Verdict {
    let coll = common::hard_5_10();
    let m = coll.num_tasks();
    let (bench, cfg) = bench_for(coll, "hard-5-10", vec![Algo::Dtece, Algo::Mucb, Algo::Mts], HORIZON);
    let dt = trials(&bench, &cfg, Algo::Dtece);
    let ucb = trials(&bench, &cfg, Algo::Mucb);
    let ts = trials(&bench, &cfg, Algo::Mts);
    let dt_final = worst_case_at(&dt, m, HORIZON);
    let dt_half = worst_case_at(&dt, m, HORIZON / 2);
    let ucb_final = worst_case_at(&ucb, m, HORIZON);
    let ts_final = worst_case_at(&ts, m, HORIZON);
    let ratio = dt_final / ucb_final;
    let growth = (dt_final - dt_half) / dt_half;
    verdict(
        ratio < 1.0 / 3.0 && growth <= 0.02,
        format!(
            "worst-case final regret dtece {dt_final:.1}, mucb {ucb_final:.1}, mts {ts_final:.1}; ratio {ratio:.3} < 0.333; second-half growth {:.2}% <= 2%",
            100.0 * growth
        ),
    )
}

fn ece_misclassification(coll: &BanditCollection, trials: u64) -> (f64, usize) {
    let cfg = EceConfig::for_collection(coll, 0.05).unwrap();
    let m = coll.num_tasks();
    let wrong = (0..trials)
        .into_par_iter()
        .filter(|&s| {
            let task = s as usize % m;
            let out = run_ece(coll, task, &cfg, HORIZON, &mut SimRng::new(s, 3)).unwrap();
            out.classified != Some(task)
        })
        .count();
    (wrong as f64 / trials as f64, cfg.n_cls)
}

fn criterion_3() -> Verdict {
    let (hard, n_hard) = ece_misclassification(&common::hard4(), 200);
    let (rand, n_rand) = ece_misclassification(&common::rand_10_20(), 200);
    verdict(
        hard <= 0.08 && rand <= 0.08,
        format!("misclassification hard-4 {hard:.3} (n_cls {n_hard}), rand-10-20 {rand:.3} (n_cls {n_rand}); both <= 0.08"),
    )
}

fn criterion_4() -> Verdict {
    let mut violations = 0;
    let mut rounds = 0;
    let mut rng = SimRng::new(44, 0);
    for _ in 0..100 {
        let m = 2 + rng.below(9);
        let k = m + 2 + rng.below(6);
        let (coll, _) = make_rand(m, k, 0.4, &mut rng).unwrap();
        let cfg = EceConfig::for_collection(&coll, 0.05).unwrap().with_mode(SampleMode::Oracle);
        let c = classification_coefficient(&coll, &cfg.tests, cfg.lambda).unwrap().value;
        for task in 0..m {
            let out = run_ece(&coll, task, &cfg, 1_000_000, &mut SimRng::new(task as u64, 0)).unwrap();
            let mut size = m;
            for r in &out.rounds {
                let removed = size - r.survivors.len();
                let required = (size as f64 / c - 1e-9).ceil() as usize;
                if removed < required || !r.survivors.contains(task) {
                    violations += 1;
                }
                rounds += 1;
                size = r.survivors.len();
            }
            if out.classified != Some(task) {
                violations += 1;
            }
        }
    }
    verdict(violations == 0, format!("{violations} violations over {rounds} noiseless rounds on 100 collections"))
}

/// `C̃` by exhaustive search over a simplex grid of test mixtures.
fn grid_randomized(coll: &BanditCollection, lambda: f64, denom: usize) -> f64 {
    let m = coll.num_tasks();
    let tests: Vec<usize> = (0..coll.num_arms())
        .filter(|&a| (0..m).any(|i| (0..m).any(|j| i != j && test_hellinger_sq(coll, i, j, a) >= lambda * lambda)))
        .collect();
    let mut worst: f64 = 0.0;
    for mask in 1u32..(1 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let s = HypothesisSet::new(members.clone()).unwrap();
        let elim: Vec<Vec<f64>> = tests
            .iter()
            .map(|&a| members.iter().map(|&i| elimination_set(coll, &s, a, i, lambda).len() as f64).collect())
            .collect();
        let mut best = 0.0f64;
        let mut counts = vec![0usize; tests.len()];
        fn rec(idx: usize, left: usize, denom: usize, counts: &mut Vec<usize>, elim: &[Vec<f64>], best: &mut f64) {
            if idx + 1 == counts.len() {
                counts[idx] = left;
                let cols = elim[0].len();
                let v = (0..cols)
                    .map(|c| counts.iter().zip(elim).map(|(&n, row)| n as f64 / denom as f64 * row[c]).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                *best = best.max(v);
                return;
            }
            for n in 0..=left {
                counts[idx] = n;
                rec(idx + 1, left - n, denom, counts, elim, best);
            }
        }
        if !tests.is_empty() {
            rec(0, denom, denom, &mut counts, &elim, &mut best);
        }
        let ratio = if best <= 0.0 { f64::INFINITY } else { members.len() as f64 / best };
        worst = worst.max(ratio);
    }
    worst
}

/// Deterministic coefficient and optimal depth by plain recursion.
fn brute_det(coll: &BanditCollection, lambda: f64) -> f64 {
    let m = coll.num_tasks();
    let mut worst: f64 = 0.0;
    for mask in 1u32..(1 << m) {
        let members: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if members.len() < 2 {
            continue;
        }
        let s = HypothesisSet::new(members.clone()).unwrap();
        let best = (0..coll.num_arms())
            .map(|a| {
                members
                    .iter()
                    .map(|&i| members.len() as f64 / elimination_set(coll, &s, a, i, lambda).len() as f64)
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    worst
}

fn brute_depth(means: &[Vec<f64>], set: &[usize]) -> Option<usize> {
    if set.len() <= 1 {
        return Some(0);
    }
    let mut best: Option<usize> = None;
    for arm in 0..means[0].len() {
        let mut values: Vec<f64> = set.iter().map(|&i| means[i][arm]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let b = 0.5 * (w[0] + w[1]);
            let left: Vec<usize> = set.iter().copied().filter(|&i| means[i][arm] <= b).collect();
            let right: Vec<usize> = set.iter().copied().filter(|&i| means[i][arm] > b).collect();
            if let (Some(l), Some(r)) = (brute_depth(means, &left), brute_depth(means, &right)) {
                let d = 1 + l.max(r);
                best = Some(best.map_or(d, |x: usize| x.min(d)));
            }
        }
    }
    best
}

fn three_distinct_arms() -> BanditCollection {
    BanditCollection::bernoulli(
        &[vec![0.1, 0.5, 0.5], vec![0.9, 0.1, 0.5], vec![0.5, 0.9, 0.1]],
        0.4,
    )
    .unwrap()
}

fn criterion_5() -> Verdict {
    let solver = SolverConfig::default();
    let hard4 = common::hard4();
    let lam = hellinger_separation_level(&hard4) * (1.0 - 1e-9);
    let tests = TestClass::all_arms(&hard4);
    let c = classification_coefficient(&hard4, &tests, lam).unwrap().value;
    let c_star = optimal_tree_depth(&hard4, &tests).unwrap();
    let c_brute = brute_det(&hard4, lam);
    let all: Vec<usize> = (0..4).collect();
    let star_brute = brute_depth(hard4.mean_table(), &all);
    let mut ok = c == 3.0 && c_brute == 3.0 && c_star == Some(2) && star_brute == Some(2);
    let mut detail = format!("hard-4: C {c} (brute {c_brute}), C* {c_star:?} (brute {star_brute:?}), C <= C* is {}", c <= 2.0);

    let small = vec![
        ("hard-2", common::hard(2, 3, 0.01)),
        ("hard-3", common::hard(3, 5, 0.01)),
        ("distinct-3", three_distinct_arms()),
        ("rand-3", make_rand(3, 4, 0.4, &mut SimRng::new(3, 0)).unwrap().0),
    ];
    let mut max_err: f64 = 0.0;
    for (name, coll) in &small {
        let lam = hellinger_separation_level(coll) * (1.0 - 1e-9);
        let tests = TestClass::all_arms(coll);
        let mw = randomized_coefficient(coll, &tests, lam, &solver).unwrap();
        let grid = grid_randomized(coll, lam, 120);
        let det = classification_coefficient(coll, &tests, lam).unwrap().value;
        let err = (mw - grid).abs();
        max_err = max_err.max(err);
        ok &= err <= 1e-3 && mw <= det + solver.tol;
        detail += &format!("; {name}: C~ {mw:.4} vs grid {grid:.4}, C {det}");
    }
    let mut rng = SimRng::new(55, 0);
    for _ in 0..20 {
        let m = 2 + rng.below(7);
        let (coll, _) = make_rand(m, m + 3, 0.4, &mut rng).unwrap();
        let lam = hellinger_separation_level(&coll) * (1.0 - 1e-9);
        let tests = TestClass::all_arms(&coll);
        let mw = randomized_coefficient(&coll, &tests, lam, &solver).unwrap();
        let det = classification_coefficient(&coll, &tests, lam).unwrap().value;
        ok &= mw <= det + solver.tol;
    }
    detail += &format!("; max |C~ - grid| {max_err:.2e} <= 1e-3; C~ <= C + tol on 24 collections");
    verdict(ok, detail)
}

/// `max_ω min_π max_i` by grid over both simplices (two tasks, three arms).
fn grid_dec(inst: &DecInstance, step: usize) -> f64 {
    let k = inst.num_arms();
    assert_eq!(k, 3);
    let mut best = f64::NEG_INFINITY;
    for w in 0..=step {
        let omega = [w as f64 / step as f64, 1.0 - w as f64 / step as f64];
        let mut inner = f64::INFINITY;
        for a in 0..=step {
            for b in 0..=step - a {
                let pi = [a as f64 / step as f64, b as f64 / step as f64, (step - a - b) as f64 / step as f64];
                let worst = (0..2)
                    .map(|i| {
                        (0..k)
                            .map(|arm| {
                                let info: f64 = (0..2).map(|mm| omega[mm] * inst.hellinger[i][mm][arm]).sum();
                                pi[arm] * (inst.gaps[i][arm] - inst.gamma * info)
                            })
                            .sum::<f64>()
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                inner = inner.min(worst);
            }
        }
        best = best.max(inner);
    }
    best
}

fn criterion_6() -> Verdict {
    let eps = 0.01;
    let coll = common::hard(2, 3, eps);
    let solver = SolverConfig::default();
    let base = DecInstance::from_collection(&coll, 0.0).unwrap();
    let dec0 = dec_coefficient(&base, 0.02, &solver).unwrap().value;
    let grid0 = grid_dec(&base, 100);
    let gammas: Vec<f64> = (0..50).map(|j| j as f64 * 0.5).collect();
    let values: Vec<f64> = gammas
        .iter()
        .map(|&g| dec_coefficient(&base.with_gamma(g), 0.02, &solver).unwrap().value)
        .collect();
    let monotone = values.windows(2).all(|w| w[1] <= w[0] + 2.0 * solver.tol);
    let ok = (dec0 - 5.0 * eps).abs() <= 1e-3 && (grid0 - 5.0 * eps).abs() <= 1e-3 && monotone && dec0 > 3.0 * eps;
    verdict(
        ok,
        format!(
            "dec_0 {dec0:.5} (grid {grid0:.5}) vs 5eps {:.3}; nonincreasing over 50 gammas: {monotone}; dec_0 > 3eps: {}; dec at gamma 24.5 = {:.5}",
            5.0 * eps,
            dec0 > 3.0 * eps,
            values[49]
        ),
    )
}

fn lemma4_fixture() -> BanditCollection {
    let ctx = ContextDistribution::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]], vec![0.3, 0.3, 0.4]).unwrap();
    let inst = |t: [[f64; 2]; 2]| BanditInstance::new(t.iter().map(|r| r.to_vec()).collect(), vec![Noise::Gaussian(0.5); 2]).unwrap();
    BanditCollection::new(
        vec![inst([[0.1, 0.1], [0.9, 0.5]]), inst([[0.7, 0.5], [0.1, 0.1]])],
        ctx,
        0.4,
    )
    .unwrap()
}

fn criterion_7() -> Verdict {
    let coll = lemma4_fixture();
    let h = 100;
    let gap = coll.min_action_gap().unwrap();
    let lambda = coll.lambda();
    let n_est = n_est_formula(0.5, 2, h, 2, 2, gap, lambda).unwrap();
    let tol = (gap / 2.0).min(lambda / 4.0);
    let reps = 2000u64;
    let outcomes: Vec<Option<bool>> = (0..reps)
        .into_par_iter()
        .map(|s| {
            let mut cfg = MetaTrainConfig::new(h, lambda, s);
            cfg.sigma = Some(0.5);
            cfg.gap = Some(gap);
            let est = meta_train(&coll, &cfg).ok()?.est;
            Some((0..2).any(|i| {
                (0..2).any(|k| {
                    let theta = coll.instance(i).theta(k);
                    let err = coll.context().expect(|c| {
                        let x = coll.context().context(c);
                        x.iter().zip(est.theta(i, k)).zip(theta).map(|((x, a), b)| x * (a - b)).sum::<f64>().abs()
                    });
                    err > tol
                })
            }))
        })
        .collect();
    let errors = outcomes.iter().filter(|o| o.is_none()).count();
    let failures = outcomes.iter().filter(|o| **o != Some(false)).count();
    let p = 1.0 / (2.0 * (h * 2 * 2) as f64);
    let bound = p + 3.0 * (p * (1.0 - p) / reps as f64).sqrt();
    let freq = failures as f64 / reps as f64;
    verdict(
        freq <= bound,
        format!("failure frequency {freq:.4} <= {bound:.4} (N_est {n_est}, gap {gap:.3}, {reps} repetitions, {errors} meta-train errors)"),
    )
}

fn criterion_8() -> Verdict {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, coll) in common::shipped() {
        let m = coll.num_tasks();
        let trained = meta_train(&coll, &MetaTrainConfig::exact(HORIZON, coll.lambda())).unwrap();
        let tree = &trained.tree;
        let paths_ok = (0..m).all(|t| tree.oracle_leaf(coll.mean_table(), t) == t);
        let depth_ok = tree.depth() <= m.saturating_sub(1);
        let rebuilt = meta_train(&coll, &MetaTrainConfig::exact(HORIZON, coll.lambda())).unwrap();
        let ratio = if m <= 15 {
            let c_star = optimal_tree_depth(&coll, &TestClass::all_arms(&coll)).unwrap().unwrap();
            format!("{:.3}", depth_ratio(tree.depth(), m, c_star.max(1)))
        } else {
            "n/a".into()
        };
        ok &= paths_ok && depth_ok && rebuilt == trained;
        detail.push(format!("{name}: depth {} paths {} ratio {ratio}", tree.depth(), if paths_ok { "ok" } else { "BAD" }));
    }
    // Seeded estimation must rebuild identically as well.
    let coll = common::hard4();
    let mut cfg = MetaTrainConfig::new(HORIZON, 0.36, 9);
    cfg.n_est = Some(2000);
    let a = meta_train(&coll, &cfg).unwrap();
    let b = meta_train(&coll, &cfg).unwrap();
    ok &= a == b && (0..4).all(|t| a.tree.oracle_leaf(coll.mean_table(), t) == t);
    verdict(ok, detail.join("; ") + "; seeded rebuild identical")
}

fn criterion_9() -> Verdict {
    let dir = std::env::temp_dir().join(format!("banditree-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let env = dir.join("hard-4.json");
    common::hard4().save(&env).unwrap();
    let run = |tag: &str| {
        let mut cfg = ExperimentConfig::new(&env, vec![Algo::Ece, Algo::Dtece, Algo::Mucb, Algo::Mts], 2000);
        cfg.runs = 5;
        cfg.seed = 99;
        cfg.output.csv = Some(dir.join(format!("{tag}.csv")));
        run_experiment(&cfg).unwrap();
        std::fs::read(dir.join(format!("{tag}.csv"))).unwrap()
    };
    let a = run("first");
    let b = run("second");
    let _ = std::fs::remove_dir_all(&dir);
    verdict(a == b && !a.is_empty(), format!("two runs, {} bytes each, identical: {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("rand-40-40 classification cost", criterion_1),
        ("hard-5-10 regret ordering and plateau", criterion_2),
        ("ECE misclassification", criterion_3),
        ("noiseless greedy contraction", criterion_4),
        ("coefficient oracles", criterion_5),
        ("DEC neighborhood", criterion_6),
        ("estimation event frequency", criterion_7),
        ("tree structure", criterion_8),
        ("byte-identical reproducibility", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        println!("[{}] {id}. {name}: {} ({secs:.1}s)", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
