//! Latent-bandit baselines that know the true collection: mUCB (confidence-set
//! elimination over models) and mTS (posterior sampling over models).

use crate::envsim::{BanditCollection, Noise};
use crate::rng::SimRng;
use crate::trajectory::{Phase, Step, Trajectory};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct MucbState {
    pub counts: Vec<u64>,
    pub sums: Vec<f64>,
    /// Times the consistent set came out empty and was reset to all models.
    pub resets: usize,
}

impl MucbState {
    pub fn new(coll: &BanditCollection) -> Self {
        Self {
            counts: vec![0; coll.num_arms()],
            sums: vec![0.0; coll.num_arms()],
            resets: 0,
        }
    }

    pub fn mean(&self, arm: usize) -> f64 {
        if self.counts[arm] == 0 {
            0.0
        } else {
            self.sums[arm] / self.counts[arm] as f64
        }
    }

    /// `√(ln(t·M·K) / (2·max(n_k, 1)))`.
    pub fn radius(&self, coll: &BanditCollection, t: usize, arm: usize) -> f64 {
        let log = (t.max(1) as f64 * coll.num_tasks() as f64 * coll.num_arms() as f64).ln().max(0.0);
        (log / (2.0 * self.counts[arm].max(1) as f64)).sqrt()
    }

    /// Models whose mean on every pulled arm lies within the radius of the
    /// empirical mean. Empty when no model is consistent.
    pub fn consistent(&self, coll: &BanditCollection, t: usize) -> Vec<usize> {
        let pulled: Vec<(usize, f64, f64)> = (0..coll.num_arms())
            .filter(|&k| self.counts[k] > 0)
            .map(|k| (k, self.mean(k), self.radius(coll, t, k)))
            .collect();
        (0..coll.num_tasks())
            .filter(|&i| pulled.iter().all(|&(k, r, c)| (r - coll.mean_reward(i, k)).abs() <= c))
            .collect()
    }
}

/// Model the next mUCB step follows: the consistent model with the highest
/// optimal value, lowest index on ties. Resets to all models when none is
/// consistent.
pub fn mucb_model(state: &mut MucbState, coll: &BanditCollection, t: usize) -> usize {
    let mut active = state.consistent(coll, t);
    if active.is_empty() {
        state.resets += 1;
        active = (0..coll.num_tasks()).collect();
    }
    let mut best = active[0];
    for &i in &active[1..] {
        if coll.optimal_value(i) > coll.optimal_value(best) {
            best = i;
        }
    }
    best
}

/// Arm played at step `t ≥ 1` under support context `ctx`.
pub fn mucb_step(state: &mut MucbState, coll: &BanditCollection, t: usize, ctx: usize) -> usize {
    let model = mucb_model(state, coll, t);
    coll.optimal_arm(model, ctx)
}

pub fn mucb_update(state: &mut MucbState, arm: usize, reward: f64) {
    state.counts[arm] += 1;
    state.sums[arm] += reward;
}

#[derive(Debug, Clone, PartialEq)]
pub struct MtsState {
    pub weights: Vec<f64>,
    /// Times every weight vanished and the posterior was reset to uniform.
    pub resets: usize,
}

impl MtsState {
    pub fn uniform(num_tasks: usize) -> Self {
        Self {
            weights: vec![1.0 / num_tasks as f64; num_tasks],
            resets: 0,
        }
    }
}

/// Samples a model from the posterior and plays its optimal arm.
pub fn mts_step(state: &MtsState, coll: &BanditCollection, ctx: usize, rng: &mut SimRng) -> usize {
    let model = rng.categorical(&state.weights);
    coll.optimal_arm(model, ctx)
}

fn likelihood(noise: Noise, mean: f64, reward: f64) -> f64 {
    match noise {
        Noise::Bernoulli => {
            let p = mean.clamp(0.0, 1.0);
            p.powf(reward) * (1.0 - p).powf(1.0 - reward)
        }
        Noise::Gaussian(sigma) if sigma == 0.0 => f64::from(u8::from((reward - mean).abs() <= 1e-12)),
        Noise::Gaussian(sigma) => {
            let z = (reward - mean) / sigma;
            (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
        }
    }
}

/// Multiplies each weight by the likelihood of `reward` and renormalizes.
pub fn mts_update(state: &mut MtsState, coll: &BanditCollection, arm: usize, ctx: usize, reward: f64) {
    for (i, w) in state.weights.iter_mut().enumerate() {
        *w *= likelihood(coll.instance(i).noise(arm), coll.context_mean(i, ctx, arm), reward);
    }
    let total: f64 = state.weights.iter().sum();
    if total > 0.0 && total.is_finite() {
        for w in &mut state.weights {
            *w /= total;
        }
    } else {
        state.resets += 1;
        *state = MtsState {
            resets: state.resets,
            ..MtsState::uniform(state.weights.len())
        };
    }
}

/// Runs mUCB on `true_task` for `horizon` steps.
pub fn run_mucb(coll: &BanditCollection, true_task: usize, horizon: usize, rng: &mut SimRng) -> Result<Trajectory> {
    coll.check_task(true_task)?;
    let mut state = MucbState::new(coll);
    let mut trajectory = Trajectory::with_capacity(horizon);
    for t in 1..=horizon {
        let context = coll.sample_context_index(rng);
        let arm = mucb_step(&mut state, coll, t, context);
        let reward = coll.sample_reward(true_task, context, arm, rng);
        mucb_update(&mut state, arm, reward);
        trajectory.push(Step {
            context,
            arm,
            reward,
            phase: Phase::Exploit,
        });
    }
    Ok(trajectory)
}

/// Runs mTS on `true_task` for `horizon` steps from a uniform prior.
pub fn run_mts(coll: &BanditCollection, true_task: usize, horizon: usize, rng: &mut SimRng) -> Result<Trajectory> {
    coll.check_task(true_task)?;
    let mut state = MtsState::uniform(coll.num_tasks());
    let mut trajectory = Trajectory::with_capacity(horizon);
    for _ in 0..horizon {
        let context = coll.sample_context_index(rng);
        let arm = mts_step(&state, coll, context, rng);
        let reward = coll.sample_reward(true_task, context, arm, rng);
        mts_update(&mut state, coll, arm, context, reward);
        trajectory.push(Step {
            context,
            arm,
            reward,
            phase: Phase::Exploit,
        });
    }
    Ok(trajectory)
}
