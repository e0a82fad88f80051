//! PAC decision-estimation coefficient over single-arm decisions.
//!
//! ```text
//! dec_γ = max_{ω ∈ Δ([M])} min_{π ∈ Δ([K])} max_i
//!           E_{k∼π}[Δ_i(k)] − γ · E_{k∼π, m∼ω}[D²(ν_i(k), ν_m(k))]
//! ```
//!
//! `ω` ranges over a simplex grid; for each grid point the inner min-max is a
//! finite zero-sum game solved with [`crate::game`].

use serde::Serialize;

use super::{randomized_coefficient, test_hellinger_sq, TestClass};
use crate::envsim::BanditCollection;
use crate::game::{solve_max_min, SolverConfig};
use crate::{Error, Result};

/// Largest collection supported by the `ω` grid.
pub const MAX_DEC_TASKS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct DecInstance {
    /// `gaps[i][k] = μ_i(k_i*) − μ_i(k)`.
    pub gaps: Vec<Vec<f64>>,
    /// `hellinger[i][m][k]`, symmetric in `(i, m)` with zero diagonal.
    pub hellinger: Vec<Vec<Vec<f64>>>,
    pub gamma: f64,
}

impl DecInstance {
    pub fn new(gaps: Vec<Vec<f64>>, hellinger: Vec<Vec<Vec<f64>>>, gamma: f64) -> Result<Self> {
        let m = gaps.len();
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if m == 0 || gaps[0].is_empty() {
            return bad("DEC instance needs at least one task and arm");
        }
        let k = gaps[0].len();
        if gaps.iter().any(|g| g.len() != k) {
            return bad("ragged gap table");
        }
        if !(gamma >= 0.0) {
            return bad("gamma must be nonnegative");
        }
        for g in &gaps {
            if g.iter().any(|v| *v < -1e-12) || !g.iter().any(|v| v.abs() <= 1e-12) {
                return bad("every task needs a zero-gap arm and no negative gaps");
            }
        }
        if hellinger.len() != m || hellinger.iter().any(|row| row.len() != m || row.iter().any(|h| h.len() != k)) {
            return bad("hellinger table must be M x M x K");
        }
        for i in 0..m {
            for j in 0..m {
                for a in 0..k {
                    let h = hellinger[i][j][a];
                    if (i == j && h != 0.0) || (h - hellinger[j][i][a]).abs() > 1e-12 {
                        return bad("hellinger table must be symmetric with zero diagonal");
                    }
                }
            }
        }
        Ok(Self { gaps, hellinger, gamma })
    }

    pub fn from_collection(coll: &BanditCollection, gamma: f64) -> Result<Self> {
        let m = coll.num_tasks();
        let k = coll.num_arms();
        let gaps = (0..m)
            .map(|i| {
                let best = coll.mean_reward(i, coll.best_mean_arm(i));
                (0..k).map(|a| (best - coll.mean_reward(i, a)).max(0.0)).collect()
            })
            .collect();
        let hellinger = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|a| test_hellinger_sq(coll, i, j, a)).collect())
                    .collect()
            })
            .collect();
        Self::new(gaps, hellinger, gamma)
    }

    pub fn num_tasks(&self) -> usize {
        self.gaps.len()
    }

    pub fn num_arms(&self) -> usize {
        self.gaps[0].len()
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..self.clone() }
    }

    /// Rows: adversary's task `i` (maximizer). Columns: arms (minimizer).
    fn payoff(&self, omega: &[f64]) -> Vec<Vec<f64>> {
        let m = self.num_tasks();
        (0..m)
            .map(|i| {
                (0..self.num_arms())
                    .map(|a| {
                        let info: f64 = (0..m).map(|j| omega[j] * self.hellinger[i][j][a]).sum();
                        self.gaps[i][a] - self.gamma * info
                    })
                    .collect()
            })
            .collect()
    }

    /// Inner game value `min_π max_i (…)` for a fixed `ω`.
    pub fn inner_value(&self, omega: &[f64], solver: &SolverConfig) -> Result<f64> {
        Ok(solve_max_min(&self.payoff(omega), solver)?.value)
    }
}

fn simplex_grid(dim: usize, steps: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, steps: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / steps as f64).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(dim, left - c, steps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, steps, steps, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecValue {
    pub value: f64,
    /// Grid point attaining the maximum.
    pub omega: Vec<f64>,
}

/// `dec_γ` with `ω` on a simplex grid of spacing `grid_step` (default 0.02).
pub fn dec_coefficient(inst: &DecInstance, grid_step: f64, solver: &SolverConfig) -> Result<DecValue> {
    let m = inst.num_tasks();
    if m > MAX_DEC_TASKS {
        return Err(Error::TooManyTasks {
            max: MAX_DEC_TASKS,
            got: m,
        });
    }
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::InvalidParameter(format!("grid step {grid_step} outside (0, 1]")));
    }
    let steps = (1.0 / grid_step).round().max(1.0) as usize;
    let mut best = DecValue {
        value: f64::NEG_INFINITY,
        omega: Vec::new(),
    };
    for omega in simplex_grid(m, steps) {
        let v = inst.inner_value(&omega, solver)?;
        if v > best.value {
            best = DecValue { value: v, omega };
        }
    }
    Ok(best)
}

/// `n` evenly spaced values in `[0, max]`.
pub fn gamma_grid(max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|j| max * j as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecRow {
    pub gamma: f64,
    pub dec: f64,
    pub above_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecScan {
    pub epsilon: f64,
    pub lambda: f64,
    pub threshold: f64,
    pub rows: Vec<DecRow>,
    /// First grid value of `γ` where `dec_γ ≤ 3ε`.
    pub crossover_gamma: Option<f64>,
    pub randomized_coefficient: Option<f64>,
    /// `γ_cross · λ² / C̃`, an empirical stand-in for the unspecified constant
    /// in the `dec_γ > 3ε` regime.
    pub empirical_constant: Option<f64>,
}

/// Sweeps `γ` and flags where `dec_γ` stays above `3ε`. `lambda` is the
/// Hellinger separation used for `C̃` over all arms.
pub fn dec_threshold_scan(
    coll: &BanditCollection,
    epsilon: f64,
    lambda: f64,
    gammas: &[f64],
    grid_step: f64,
    solver: &SolverConfig,
) -> Result<DecScan> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} must be positive")));
    }
    if coll.num_tasks() > MAX_DEC_TASKS {
        return Err(Error::TooManyTasks {
            max: MAX_DEC_TASKS,
            got: coll.num_tasks(),
        });
    }
    let base = DecInstance::from_collection(coll, 0.0)?;
    let threshold = 3.0 * epsilon;
    let mut rows = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let dec = dec_coefficient(&base.with_gamma(gamma), grid_step, solver)?.value;
        rows.push(DecRow {
            gamma,
            dec,
            above_threshold: dec > threshold,
        });
    }
    let crossover_gamma = rows.iter().find(|r| !r.above_threshold).map(|r| r.gamma);
    let c_tilde = randomized_coefficient(coll, &TestClass::all_arms(coll), lambda, solver)
        .ok()
        .filter(|c| c.is_finite());
    let empirical_constant = match (crossover_gamma, c_tilde) {
        (Some(g), Some(c)) => Some(g * lambda * lambda / c),
        _ => None,
    };
    Ok(DecScan {
        epsilon,
        lambda,
        threshold,
        rows,
        crossover_gamma,
        randomized_coefficient: c_tilde,
        empirical_constant,
    })
}
