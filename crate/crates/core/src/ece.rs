//! Explicit Classify then Exploit against a known collection.
//!
//! Each round picks the test whose worst-case elimination count is largest,
//! draws `n_cls` samples from the test task with it, and keeps only the
//! hypotheses whose log-likelihood is within `3 ln(M/δ)` of the best one. If no
//! test has a positive worst-case count on the survivors, the round instead
//! uses an untried test separating the most pairs. Once a
//! single hypothesis survives, its optimal policy is played until the horizon.

use crate::complexity::{hellinger_separation_level, HypothesisSet, SeparationTable, TestClass};
use crate::envsim::{check_hellinger_separation, BanditCollection, Noise};
use crate::rng::SimRng;
use crate::trajectory::{Phase, Step, Trajectory};
use crate::{Error, Result};

/// Bernoulli means are clamped to `[CLAMP, 1 − CLAMP]` inside [`loglik`].
pub const CLAMP: f64 = 1e-9;

/// How classification samples are observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleMode {
    #[default]
    Stochastic,
    /// Noise disabled: log-likelihoods are their expectations under the test
    /// task, so every λ-separated hypothesis is eliminated deterministically.
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EceConfig {
    pub n_cls: usize,
    pub delta: f64,
    /// Hellinger separation level; tests eliminate pairs with `hellinger_sq ≥ λ²`.
    pub lambda: f64,
    pub tests: TestClass,
    pub max_rounds: usize,
    pub mode: SampleMode,
}

impl EceConfig {
    pub fn new(coll: &BanditCollection, lambda: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1)")));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidParameter(format!("lambda {lambda} outside (0, 1]")));
        }
        let m = coll.num_tasks();
        Ok(Self {
            n_cls: default_n_cls(m, delta, lambda),
            delta,
            lambda,
            tests: TestClass::all_arms(coll),
            max_rounds: default_max_rounds(m, delta),
            mode: SampleMode::Stochastic,
        })
    }

    /// Uses the largest Hellinger separation level the collection satisfies.
    pub fn for_collection(coll: &BanditCollection, delta: f64) -> Result<Self> {
        let level = hellinger_separation_level(coll);
        if level <= 0.0 {
            return Err(Error::InvalidParameter(
                "collection is not Hellinger-separated by any arm".into(),
            ));
        }
        // Shave the last bits so that `λ²` does not round above the attained distance.
        Self::new(coll, level * (1.0 - 1e-9), delta)
    }

    pub fn with_mode(mut self, mode: SampleMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_n_cls(mut self, n_cls: usize) -> Self {
        self.n_cls = n_cls;
        self
    }

    /// `β = ln(M/δ)`.
    pub fn beta(&self, num_tasks: usize) -> f64 {
        (num_tasks as f64 / self.delta).ln()
    }
}

/// `⌈2 ln(M/δ) / λ²⌉`, at least 1.
pub fn default_n_cls(num_tasks: usize, delta: f64, lambda: f64) -> usize {
    let beta = (num_tasks.max(1) as f64 / delta).ln().max(0.0);
    ((2.0 * beta / (lambda * lambda)).ceil() as usize).max(1)
}

/// `M · ⌈ln(M/δ)⌉ + 1`.
pub fn default_max_rounds(num_tasks: usize, delta: f64) -> usize {
    let beta = (num_tasks.max(1) as f64 / delta).ln().max(0.0);
    num_tasks * beta.ceil() as usize + 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub context: usize,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundLog {
    pub round: usize,
    pub test: usize,
    pub samples: Vec<Sample>,
    /// `(task, ℓ_task)` for every hypothesis alive at the start of the round.
    pub loglik: Vec<(usize, f64)>,
    pub survivors: HypothesisSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EceOutcome {
    pub trajectory: Trajectory,
    /// `None` if the horizon ran out before a single hypothesis remained.
    pub classified: Option<usize>,
    pub rounds: Vec<RoundLog>,
    pub truncated: bool,
}

/// The arm maximizing `min_{i∈S} |S̄(i)|`, ties to the first test in `tests`.
pub fn greedy_test(subset: &HypothesisSet, coll: &BanditCollection, tests: &TestClass, lambda: f64) -> Result<usize> {
    let table = SeparationTable::new(coll, tests, lambda)?;
    greedy_from_table(&table, subset)
}

fn greedy_from_table(table: &SeparationTable, subset: &HypothesisSet) -> Result<usize> {
    let (t, score) = table.greedy(subset.mask());
    if score == 0 {
        return Err(Error::NoSeparatingTest(subset.members().to_vec()));
    }
    Ok(table.tests()[t])
}

/// Table index of the test used by [`run_ece`]. When no test separates every
/// member from someone, falls back to the test separating the most pairs among
/// those not yet tried on this survivor set.
fn round_test(table: &SeparationTable, subset: &HypothesisSet, tried: &[bool]) -> Result<usize> {
    let (t, score) = table.greedy(subset.mask());
    if score > 0 {
        return Ok(t);
    }
    let mut best = (0, 0);
    for t in (0..table.tests().len()).filter(|&t| !tried[t]) {
        let score = table.separated_count(t, subset.mask());
        if score > best.1 {
            best = (t, score);
        }
    }
    if best.1 == 0 {
        return Err(Error::NoSeparatingTest(subset.members().to_vec()));
    }
    Ok(best.0)
}

fn log_density(noise: Noise, mean: f64, reward: f64, clamp: bool) -> f64 {
    match noise {
        Noise::Bernoulli => {
            let p = if clamp { mean.clamp(CLAMP, 1.0 - CLAMP) } else { mean.clamp(0.0, 1.0) };
            let mut ll = 0.0;
            if reward > 0.0 {
                ll += reward * p.ln();
            }
            if reward < 1.0 {
                ll += (1.0 - reward) * (1.0 - p).ln();
            }
            ll
        }
        Noise::Gaussian(sigma) => {
            if sigma == 0.0 {
                return if (reward - mean).abs() <= 1e-12 { 0.0 } else { f64::NEG_INFINITY };
            }
            let z = (reward - mean) / sigma;
            -0.5 * (2.0 * std::f64::consts::PI * sigma * sigma).ln() - 0.5 * z * z
        }
    }
}

/// `ℓ_i = Σ log ν_i(x, arm)(r)` with Bernoulli means clamped away from 0 and 1.
/// The context factor `P(x)` is common to all tasks and omitted.
pub fn loglik(coll: &BanditCollection, task: usize, arm: usize, samples: &[Sample]) -> f64 {
    loglik_impl(coll, task, arm, samples, true)
}

/// [`loglik`] without clamping; impossible samples give `−∞`.
pub fn loglik_unclamped(coll: &BanditCollection, task: usize, arm: usize, samples: &[Sample]) -> f64 {
    loglik_impl(coll, task, arm, samples, false)
}

fn loglik_impl(coll: &BanditCollection, task: usize, arm: usize, samples: &[Sample], clamp: bool) -> f64 {
    let noise = coll.instance(task).noise(arm);
    samples
        .iter()
        .map(|s| log_density(noise, coll.context_mean(task, s.context, arm), s.reward, clamp))
        .sum()
}

/// Expected value of [`loglik`] for one sample drawn from `truth`.
fn expected_log_density(coll: &BanditCollection, truth: usize, task: usize, arm: usize) -> f64 {
    coll.context().expect(|c| {
        let target = coll.reward_dist(truth, c, arm);
        let mean = coll.context_mean(task, c, arm);
        match (coll.instance(task).noise(arm), target) {
            (Noise::Bernoulli, _) => {
                let q = target.mean();
                log_density(Noise::Bernoulli, mean, q, true)
            }
            (Noise::Gaussian(sigma), crate::RewardDist::Gaussian { mean: mu, sigma: s_true }) if sigma > 0.0 => {
                -0.5 * (2.0 * std::f64::consts::PI * sigma * sigma).ln()
                    - (s_true * s_true + (mu - mean) * (mu - mean)) / (2.0 * sigma * sigma)
            }
            (noise, target) => log_density(noise, mean, target.mean(), true),
        }
    })
}

/// Survivors of a round given per-hypothesis log-likelihoods.
pub fn filter_by_loglik(loglik: &[(usize, f64)], num_tasks: usize, delta: f64) -> HypothesisSet {
    let threshold = 3.0 * (num_tasks as f64 / delta).ln();
    let best = loglik.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
    let keep: Vec<usize> = loglik
        .iter()
        .filter(|(_, l)| *l >= best - threshold || best == f64::NEG_INFINITY)
        .map(|(i, _)| *i)
        .collect();
    HypothesisSet::new(keep).expect("the maximum-likelihood hypothesis always survives")
}

/// Keeps every `i ∈ S` with `ℓ_i ≥ max_m ℓ_m − 3 ln(M/δ)`.
pub fn update_hypotheses(
    subset: &HypothesisSet,
    arm: usize,
    samples: &[Sample],
    coll: &BanditCollection,
    delta: f64,
) -> HypothesisSet {
    let ll: Vec<(usize, f64)> = subset
        .members()
        .iter()
        .map(|&i| (i, loglik(coll, i, arm, samples)))
        .collect();
    filter_by_loglik(&ll, coll.num_tasks(), delta)
}

/// Runs classification on `true_task` followed by exploitation until `horizon`.
pub fn run_ece(
    coll: &BanditCollection,
    true_task: usize,
    cfg: &EceConfig,
    horizon: usize,
    rng: &mut SimRng,
) -> Result<EceOutcome> {
    coll.check_task(true_task)?;
    if cfg.n_cls == 0 {
        return Err(Error::InvalidParameter("n_cls must be at least 1".into()));
    }
    if !check_hellinger_separation(coll, cfg.lambda) {
        return Err(Error::InvalidParameter(format!(
            "collection is not Hellinger-separated at lambda = {}",
            cfg.lambda
        )));
    }
    let m = coll.num_tasks();
    let table = SeparationTable::new(coll, &cfg.tests, cfg.lambda)?;
    let mut survivors = HypothesisSet::full(m);
    let mut rounds = Vec::new();
    let mut trajectory = Trajectory::with_capacity(horizon);
    let mut tried = vec![false; table.tests().len()];

    while !survivors.is_singleton() {
        if rounds.len() >= cfg.max_rounds {
            return Err(Error::MaxRoundsExceeded(cfg.max_rounds));
        }
        let index = round_test(&table, &survivors, &tried)?;
        let arm = table.tests()[index];
        let budget = horizon - trajectory.len();
        let n = cfg.n_cls.min(budget);
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let context = coll.sample_context_index(rng);
            let reward = match cfg.mode {
                SampleMode::Stochastic => coll.sample_reward(true_task, context, arm, rng),
                SampleMode::Oracle => coll.context_mean(true_task, context, arm),
            };
            samples.push(Sample { context, reward });
            trajectory.push(Step {
                context,
                arm,
                reward,
                phase: Phase::Classify,
            });
        }
        if n < cfg.n_cls {
            return Ok(EceOutcome {
                trajectory,
                classified: None,
                rounds,
                truncated: true,
            });
        }
        let ll: Vec<(usize, f64)> = survivors
            .members()
            .iter()
            .map(|&i| {
                let l = match cfg.mode {
                    SampleMode::Stochastic => loglik(coll, i, arm, &samples),
                    SampleMode::Oracle => cfg.n_cls as f64 * expected_log_density(coll, true_task, i, arm),
                };
                (i, l)
            })
            .collect();
        let next = filter_by_loglik(&ll, m, cfg.delta);
        rounds.push(RoundLog {
            round: rounds.len(),
            test: arm,
            samples,
            loglik: ll,
            survivors: next.clone(),
        });
        if next.len() < survivors.len() {
            tried.fill(false);
        } else {
            tried[index] = true;
        }
        survivors = next;
    }

    let classified = survivors.members()[0];
    while trajectory.len() < horizon {
        let context = coll.sample_context_index(rng);
        let arm = coll.optimal_arm(classified, context);
        let reward = coll.sample_reward(true_task, context, arm, rng);
        trajectory.push(Step {
            context,
            arm,
            reward,
            phase: Phase::Exploit,
        });
    }
    Ok(EceOutcome {
        trajectory,
        classified: Some(classified),
        rounds,
        truncated: false,
    })
}
