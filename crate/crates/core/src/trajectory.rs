//! Per-step records produced at test time and the regret traces built on them.

use serde::Serialize;

use crate::envsim::BanditCollection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Classify,
    Exploit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Step {
    /// Index into the collection's context support.
    pub context: usize,
    pub arm: usize,
    pub reward: f64,
    pub phase: Phase,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub steps: Vec<Step>,
}

impl Trajectory {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            steps: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn classification_pulls(&self) -> usize {
        self.steps.iter().filter(|s| s.phase == Phase::Classify).count()
    }

    /// Cumulative expected-gap regret against `task`.
    pub fn pseudo_regret(&self, coll: &BanditCollection, task: usize) -> Vec<f64> {
        let mut total = 0.0;
        self.steps
            .iter()
            .map(|s| {
                total += crate::dtece::pseudo_regret_step(coll, task, s.context, s.arm);
                total
            })
            .collect()
    }

    /// Cumulative realized regret `Σ max_k x·θ_k − r_t`.
    pub fn realized_regret(&self, coll: &BanditCollection, task: usize) -> Vec<f64> {
        let mut total = 0.0;
        self.steps
            .iter()
            .map(|s| {
                let best = coll.context_mean(task, s.context, coll.optimal_arm(task, s.context));
                total += best - s.reward;
                total
            })
            .collect()
    }
}

/// Cumulative regret per step of one seeded trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace {
    pub algo: String,
    pub env: String,
    pub task: usize,
    pub run: usize,
    pub seed: u64,
    pub cumulative: Vec<f64>,
}

impl RegretTrace {
    /// Cumulative regret after `step` pulls (1-based); the last value is held
    /// if the trial ended early.
    pub fn at(&self, step: usize) -> f64 {
        match self.cumulative.len() {
            0 => 0.0,
            n => self.cumulative[step.clamp(1, n) - 1],
        }
    }

    pub fn final_value(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}
