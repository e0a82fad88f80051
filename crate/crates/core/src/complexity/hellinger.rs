use crate::envsim::{BanditCollection, RewardDist};
use crate::{Error, Result};

fn bhattacharyya(p: &RewardDist, q: &RewardDist) -> Option<f64> {
    match (*p, *q) {
        (RewardDist::Bernoulli(a), RewardDist::Bernoulli(b)) => {
            let a = a.clamp(0.0, 1.0);
            let b = b.clamp(0.0, 1.0);
            Some((a * b).sqrt() + ((1.0 - a) * (1.0 - b)).sqrt())
        }
        (RewardDist::Gaussian { mean: m1, sigma: s1 }, RewardDist::Gaussian { mean: m2, sigma: s2 }) => {
            let var = s1 * s1 + s2 * s2;
            if var == 0.0 {
                return Some(if m1 == m2 { 1.0 } else { 0.0 });
            }
            if s1 == 0.0 || s2 == 0.0 {
                return Some(0.0);
            }
            let diff = m1 - m2;
            Some((2.0 * s1 * s2 / var).sqrt() * (-diff * diff / (4.0 * var)).exp())
        }
        _ => None,
    }
}

/// Squared Hellinger distance `1 − BC(p, q)`, in `[0, 1]`.
///
/// Bernoulli: `1 − √(ab) − √((1−a)(1−b))`. Gaussians with equal σ:
/// `1 − exp(−(μ₁−μ₂)²/(8σ²))`.
pub fn hellinger_sq(p: &RewardDist, q: &RewardDist) -> Result<f64> {
    let bc = bhattacharyya(p, q).ok_or(Error::MixedFamilies)?;
    Ok((1.0 - bc).clamp(0.0, 1.0))
}

/// Squared Hellinger distance between the joint (context, reward) laws that
/// tasks `i` and `j` induce when arm `arm` is pulled on every context.
///
/// The context law is shared, so `BC = Σ_x P(x) · BC(ν_i(x, k), ν_j(x, k))`.
/// Arms with different noise families are mutually singular and give 1.
pub fn test_hellinger_sq(coll: &BanditCollection, i: usize, j: usize, arm: usize) -> f64 {
    if i == j {
        return 0.0;
    }
    let bc = coll.context().expect(|c| {
        bhattacharyya(&coll.reward_dist(i, c, arm), &coll.reward_dist(j, c, arm)).unwrap_or(0.0)
    });
    (1.0 - bc).clamp(0.0, 1.0)
}

/// Largest `λ` for which every pair is separated by some arm at `hellinger_sq ≥ λ²`.
/// Collections with a single task return 1.
pub fn hellinger_separation_level(coll: &BanditCollection) -> f64 {
    let m = coll.num_tasks();
    let mut level = 1.0f64;
    for i in 0..m {
        for j in i + 1..m {
            let best = (0..coll.num_arms())
                .map(|a| test_hellinger_sq(coll, i, j, a))
                .fold(0.0f64, f64::max);
            level = level.min(best.sqrt());
        }
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envsim::{BanditInstance, ContextDistribution, Noise};
    use proptest::prelude::*;

    fn ber(p: f64) -> RewardDist {
        RewardDist::Bernoulli(p)
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(hellinger_sq(&ber(0.5), &ber(0.5)).unwrap(), 0.0);
        let v = hellinger_sq(&ber(0.7), &ber(0.3)).unwrap();
        assert!((v - (1.0 - 2.0 * 0.21f64.sqrt())).abs() < 1e-15);
        assert!((v - 0.08348).abs() < 1e-5);
        assert_eq!(hellinger_sq(&ber(1.0), &ber(0.0)).unwrap(), 1.0);
        let v = hellinger_sq(&ber(0.9), &ber(0.1)).unwrap();
        assert!((v - 0.4).abs() < 1e-12);
    }

    #[test]
    fn gaussian_equal_sigma() {
        let p = RewardDist::Gaussian { mean: 0.2, sigma: 0.5 };
        let q = RewardDist::Gaussian { mean: 0.7, sigma: 0.5 };
        let v = hellinger_sq(&p, &q).unwrap();
        assert!((v - (1.0 - (-0.25f64 / 2.0).exp())).abs() < 1e-15);
    }

    #[test]
    fn mixed_families_error() {
        let q = RewardDist::Gaussian { mean: 0.5, sigma: 1.0 };
        assert!(matches!(hellinger_sq(&ber(0.5), &q), Err(Error::MixedFamilies)));
    }

    #[test]
    fn joint_distance_averages_over_contexts() {
        let ctx = ContextDistribution::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.25, 0.75]).unwrap();
        let a = BanditInstance::new(vec![vec![0.7, 0.5]], vec![Noise::Bernoulli]).unwrap();
        let b = BanditInstance::new(vec![vec![0.3, 0.5]], vec![Noise::Bernoulli]).unwrap();
        let coll = BanditCollection::new(vec![a, b], ctx, 0.1).unwrap();
        let per_ctx = hellinger_sq(&ber(0.7), &ber(0.3)).unwrap();
        assert!((test_hellinger_sq(&coll, 0, 1, 0) - 0.25 * per_ctx).abs() < 1e-15);
    }

    #[test]
    fn separation_level() {
        let coll = BanditCollection::bernoulli(&[vec![0.9, 0.5], vec![0.1, 0.5]], 0.1).unwrap();
        assert!((hellinger_separation_level(&coll) - 0.4f64.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn bernoulli_symmetric_bounded(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let ab = hellinger_sq(&ber(a), &ber(b)).unwrap();
            let ba = hellinger_sq(&ber(b), &ber(a)).unwrap();
            prop_assert!((ab - ba).abs() < 1e-15);
            prop_assert!((0.0..=1.0).contains(&ab));
            if (a - b).abs() > 1e-6 {
                prop_assert!(ab > 0.0);
            }
            prop_assert!(hellinger_sq(&ber(a), &ber(a)).unwrap() < 1e-15);
        }
    }
}
