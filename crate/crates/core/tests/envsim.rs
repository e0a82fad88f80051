mod common;

use banditree::complexity::{hellinger_sq, test_hellinger_sq};
use banditree::envsim::{check_separation, make_hard, make_rand, HardInstanceSpec};
use banditree::{BanditCollection, BanditInstance, ContextDistribution, Noise, RewardDist, SimRng};
use proptest::prelude::*;

#[test]
fn bernoulli_hellinger_closed_forms() {
    let h = hellinger_sq(&RewardDist::Bernoulli(0.7), &RewardDist::Bernoulli(0.3)).unwrap();
    assert!((h - (1.0 - 2.0 * 0.21f64.sqrt())).abs() < 1e-12);
    let h = hellinger_sq(&RewardDist::Bernoulli(1.0), &RewardDist::Bernoulli(0.0)).unwrap();
    assert!((h - 1.0).abs() < 1e-15);
    let h = hellinger_sq(&RewardDist::Bernoulli(0.4), &RewardDist::Bernoulli(0.4)).unwrap();
    assert!(h.abs() < 1e-15);
}

#[test]
fn gaussian_hellinger_equal_sigma() {
    let p = RewardDist::Gaussian { mean: 0.2, sigma: 0.5 };
    let q = RewardDist::Gaussian { mean: 0.9, sigma: 0.5 };
    let want = 1.0 - (-(0.7f64 * 0.7) / (8.0 * 0.25)).exp();
    assert!((hellinger_sq(&p, &q).unwrap() - want).abs() < 1e-12);
}

#[test]
fn hard_means_match_construction() {
    let eps = 0.01;
    let coll = common::hard4();
    for i in 0..4 {
        for k in 0..4 {
            let want = if k == i { 0.75 + 10.0 * eps } else { 0.75 };
            assert!((coll.mean_reward(i, k) - want).abs() < 1e-12);
        }
        // Arms 4 and 5 reveal bits 0 and 1 of the task index.
        for (bit, arm) in [(0, 4), (1, 5)] {
            let want = if i >> bit & 1 == 1 { 0.3 } else { 0.7 };
            assert!((coll.mean_reward(i, arm) - want).abs() < 1e-12, "task {i} arm {arm}");
        }
        assert_eq!(coll.best_mean_arm(i), i);
    }
}

#[test]
fn hard_rejects_too_few_arms() {
    assert!(make_hard(&HardInstanceSpec::new(4, 5, 0.01, 0.4)).is_err());
    assert!(make_hard(&HardInstanceSpec::new(4, 6, 0.03, 0.4)).is_err());
}

#[test]
fn collection_json_round_trip() {
    let coll = common::rand_10_20();
    let back = BanditCollection::from_json(&coll.to_json().unwrap()).unwrap();
    assert_eq!(back.mean_table(), coll.mean_table());
    assert_eq!(back.lambda(), coll.lambda());
}

#[test]
fn contextual_means_are_expectations() {
    let ctx = ContextDistribution::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.25, 0.75]).unwrap();
    let inst = BanditInstance::new(vec![vec![0.8, 0.2], vec![0.1, 0.6]], vec![Noise::Gaussian(0.1); 2]).unwrap();
    let coll = BanditCollection::new(vec![inst], ctx, 0.1).unwrap();
    assert!((coll.mean_reward(0, 0) - 0.35).abs() < 1e-12);
    assert!((coll.mean_reward(0, 1) - 0.475).abs() < 1e-12);
    assert_eq!(coll.optimal_arm(0, 0), 0);
    assert_eq!(coll.optimal_arm(0, 1), 1);

    let mut rng = SimRng::new(3, 0);
    let n = 40_000;
    let mean: f64 = (0..n)
        .map(|_| {
            let c = coll.sample_context_index(&mut rng);
            coll.sample_reward(0, c, 1, &mut rng)
        })
        .sum::<f64>()
        / n as f64;
    assert!((mean - 0.475).abs() < 0.01, "{mean}");
}

#[test]
fn bernoulli_sample_frequency() {
    let coll = BanditCollection::bernoulli(&[vec![0.3]], 0.4).unwrap();
    let mut rng = SimRng::new(11, 0);
    let n = 20_000;
    let hits: f64 = (0..n).map(|_| coll.sample_reward(0, 0, 0, &mut rng)).sum();
    let sd = (0.3f64 * 0.7 / n as f64).sqrt();
    assert!((hits / n as f64 - 0.3).abs() < 4.0 * sd);
}

#[test]
fn same_seed_same_stream() {
    let a: Vec<u64> = {
        let mut r = SimRng::new(9, 2);
        (0..5).map(|_| r.next_u64()).collect()
    };
    let b: Vec<u64> = {
        let mut r = SimRng::new(9, 2);
        (0..5).map(|_| r.next_u64()).collect()
    };
    let c: Vec<u64> = {
        let mut r = SimRng::new(9, 3);
        (0..5).map(|_| r.next_u64()).collect()
    };
    assert_eq!(a, b);
    assert_ne!(a, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rand_collections_are_separated(m in 2usize..9, extra in 0usize..6, seed in any::<u64>()) {
        let k = m + extra + 1;
        let (coll, _) = make_rand(m, k, 0.4, &mut SimRng::new(seed, 0)).unwrap();
        for i in 0..m {
            for k in 0..k {
                let mu = coll.mean_reward(i, k);
                prop_assert!((0.05..=0.95).contains(&mu));
            }
            for j in i + 1..m {
                let best = (0..k)
                    .map(|a| (coll.mean_reward(i, a) - coll.mean_reward(j, a)).abs())
                    .fold(0.0, f64::max);
                prop_assert!(best > 0.4, "tasks {} {} only {}", i, j, best);
            }
        }
        prop_assert!(check_separation(&coll, 0.4).separated);
    }

    #[test]
    fn hellinger_is_symmetric_and_bounded(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let p = RewardDist::Bernoulli(a);
        let q = RewardDist::Bernoulli(b);
        let h = hellinger_sq(&p, &q).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&h));
        prop_assert!((h - hellinger_sq(&q, &p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn test_hellinger_grows_with_mean_gap(d in 0.0f64..0.45) {
        let lo = BanditCollection::bernoulli(&[vec![0.5], vec![0.5 + d]], 0.1).unwrap();
        let hi = BanditCollection::bernoulli(&[vec![0.5], vec![0.5 + d + 0.04]], 0.1).unwrap();
        prop_assert!(test_hellinger_sq(&lo, 0, 1, 0) <= test_hellinger_sq(&hi, 0, 1, 0));
    }
}

#[test]
fn shipped_fixtures_match_builders() {
    for (name, coll) in common::shipped() {
        let path = common::fixtures_dir().join(format!("{name}.json"));
        let loaded = BanditCollection::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(loaded, coll, "{name}");
    }
}
