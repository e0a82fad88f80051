mod common;

use banditree::baselines::{run_mts, run_mucb};
use banditree::dtece::{run_dtece, DtEceConfig, NclsConstant};
use banditree::metatrain::{meta_train, MetaTrainConfig};
use banditree::{Phase, SimRng};
use proptest::prelude::*;

#[test]
fn dtece_classifies_hard4() {
    let coll = common::hard4();
    let trained = meta_train(&coll, &MetaTrainConfig::exact(10_000, 0.4)).unwrap();
    let cfg = DtEceConfig::new(10_000);
    let mut correct = 0;
    for seed in 0..200u64 {
        let task = (seed % 4) as usize;
        let out = run_dtece(&coll, task, &trained.tree, &trained.est, &cfg, &mut SimRng::new(seed, 0)).unwrap();
        assert_eq!(out.trajectory.classification_pulls(), out.path.len() * out.n_cls);
        correct += usize::from(out.classified == Some(task));
    }
    assert!(correct >= 196, "{correct}");
}

#[test]
fn classification_precedes_exploitation() {
    let coll = common::rand_10_20();
    let trained = meta_train(&coll, &MetaTrainConfig::exact(5000, 0.4)).unwrap();
    let mut cfg = DtEceConfig::new(5000);
    cfg.constant = NclsConstant::Algorithm;
    let out = run_dtece(&coll, 7, &trained.tree, &trained.est, &cfg, &mut SimRng::new(1, 0)).unwrap();
    let first_exploit = out.trajectory.steps.iter().position(|s| s.phase == Phase::Exploit).unwrap();
    assert_eq!(first_exploit, out.trajectory.classification_pulls());
    assert!(out.trajectory.steps[first_exploit..].iter().all(|s| s.phase == Phase::Exploit));
    for v in &out.path {
        assert_eq!(v.went_true, v.mean <= v.threshold);
    }
}

#[test]
fn constant_choice_orders_sample_counts() {
    let coll = common::hard4();
    let trained = meta_train(&coll, &MetaTrainConfig::exact(10_000, 0.4)).unwrap();
    let proof = DtEceConfig::new(10_000).resolve_n_cls(&trained.tree);
    let alg = DtEceConfig {
        constant: NclsConstant::Algorithm,
        ..DtEceConfig::new(10_000)
    }
    .resolve_n_cls(&trained.tree);
    assert!(alg < proof);
    let explicit = DtEceConfig {
        n_cls: Some(17),
        ..DtEceConfig::new(10_000)
    };
    assert_eq!(explicit.resolve_n_cls(&trained.tree), 17);
}

#[test]
fn baselines_beat_linear_regret_on_hard4() {
    let coll = common::hard4();
    let horizon = 4000;
    // Uniform play over 6 arms on task 0 loses at least 1/6 of the revealing gap per step.
    let uniform: f64 = (0..6)
        .map(|a| coll.mean_reward(0, 0) - coll.mean_reward(0, a))
        .sum::<f64>()
        / 6.0
        * horizon as f64;
    for seed in 0..5 {
        let mucb = run_mucb(&coll, 0, horizon, &mut SimRng::new(seed, 0)).unwrap();
        let mts = run_mts(&coll, 0, horizon, &mut SimRng::new(seed, 0)).unwrap();
        assert!(*mucb.pseudo_regret(&coll, 0).last().unwrap() < uniform);
        assert!(*mts.pseudo_regret(&coll, 0).last().unwrap() < uniform);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn regret_is_monotone_and_bounded(task in 0usize..4, seed in any::<u64>(), algo in 0usize..3) {
        let coll = common::hard4();
        let horizon = 600;
        let traj = match algo {
            0 => run_mucb(&coll, task, horizon, &mut SimRng::new(seed, 0)).unwrap(),
            1 => run_mts(&coll, task, horizon, &mut SimRng::new(seed, 0)).unwrap(),
            _ => {
                let trained = meta_train(&coll, &MetaTrainConfig::exact(horizon, 0.4)).unwrap();
                run_dtece(&coll, task, &trained.tree, &trained.est, &DtEceConfig::new(horizon), &mut SimRng::new(seed, 0))
                    .unwrap()
                    .trajectory
            }
        };
        let reg = traj.pseudo_regret(&coll, task);
        prop_assert_eq!(reg.len(), horizon);
        prop_assert!(reg[0] >= 0.0);
        prop_assert!(reg.windows(2).all(|w| w[1] >= w[0]));
        // No single step loses more than the largest gap.
        prop_assert!(reg.last().unwrap() <= &(horizon as f64 * (0.85 - 0.3)));
    }
}
