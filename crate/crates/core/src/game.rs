//! Finite two-player zero-sum games solved with optimistic multiplicative
//! weights.
//!
//! The row player maximizes `payoff[r][c]`, the column player minimizes it.
//! Every iterate yields a certified bracket on the game value: a row mixture
//! `x` guarantees at least `min_c (xᵀA)_c`, a column mixture `y` concedes at
//! most `max_r (Ay)_r`. The solver stops once the best bracket is narrower than
//! the tolerance.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Target duality gap, in payoff units.
    pub tol: f64,
    pub max_iter: usize,
    /// Step size on payoffs rescaled to `[0, 1]`.
    pub step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_iter: 100_000,
            step: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution {
    /// Midpoint of the certified bracket.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Row mixture certifying `lower`.
    pub row_strategy: Vec<f64>,
    /// Column mixture certifying `upper`.
    pub col_strategy: Vec<f64>,
    pub iterations: usize,
}

impl GameSolution {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

fn row_guarantee(a: &[Vec<f64>], x: &[f64]) -> f64 {
    let cols = a[0].len();
    (0..cols)
        .map(|c| a.iter().zip(x).map(|(row, p)| p * row[c]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

fn col_concession(a: &[Vec<f64>], y: &[f64]) -> f64 {
    a.iter()
        .map(|row| row.iter().zip(y).map(|(v, q)| v * q).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

fn softmax_into(logits: &[f64], out: &mut [f64]) {
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for (o, l) in out.iter_mut().zip(logits) {
        *o = (l - top).exp();
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

fn unit(n: usize, idx: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[idx] = 1.0;
    v
}

/// Value of the game `max_x min_y xᵀAy`.
pub fn solve_max_min(payoff: &[Vec<f64>], cfg: &SolverConfig) -> Result<GameSolution> {
    let rows = payoff.len();
    if rows == 0 || payoff[0].is_empty() || payoff.iter().any(|r| r.len() != payoff[0].len()) {
        return Err(Error::InvalidParameter("payoff matrix must be non-empty and rectangular".into()));
    }
    if payoff.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("payoff matrix must be finite".into()));
    }
    let cols = payoff[0].len();

    // Pure-strategy bracket.
    let (best_row, lower) = payoff
        .iter()
        .enumerate()
        .map(|(r, row)| (r, row.iter().copied().fold(f64::INFINITY, f64::min)))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let (best_col, upper) = (0..cols)
        .map(|c| (c, payoff.iter().map(|row| row[c]).fold(f64::NEG_INFINITY, f64::max)))
        .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });

    let mut sol = GameSolution {
        value: 0.5 * (lower + upper),
        lower,
        upper,
        row_strategy: unit(rows, best_row),
        col_strategy: unit(cols, best_col),
        iterations: 0,
    };
    if sol.gap() <= cfg.tol {
        return Ok(sol);
    }

    let lo = payoff.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = payoff.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = hi - lo;
    let scaled: Vec<Vec<f64>> = payoff
        .iter()
        .map(|row| row.iter().map(|v| (v - lo) / scale).collect())
        .collect();

    let eta = cfg.step;
    let mut x = vec![1.0 / rows as f64; rows];
    let mut y = vec![1.0 / cols as f64; cols];
    let mut x_logits = vec![0.0; rows];
    let mut y_logits = vec![0.0; cols];
    let mut prev_gain = vec![0.0; rows];
    let mut prev_loss = vec![0.0; cols];
    let mut x_sum = vec![0.0; rows];
    let mut y_sum = vec![0.0; cols];
    let mut gain = vec![0.0; rows];
    let mut loss = vec![0.0; cols];
    let mut x_avg = vec![0.0; rows];
    let mut y_avg = vec![0.0; cols];

    for iter in 1..=cfg.max_iter {
        for (g, row) in gain.iter_mut().zip(&scaled) {
            *g = row.iter().zip(&y).map(|(v, q)| v * q).sum();
        }
        for (c, l) in loss.iter_mut().enumerate() {
            *l = scaled.iter().zip(&x).map(|(row, p)| p * row[c]).sum();
        }
        for r in 0..rows {
            x_logits[r] += eta * (2.0 * gain[r] - prev_gain[r]);
        }
        for c in 0..cols {
            y_logits[c] -= eta * (2.0 * loss[c] - prev_loss[c]);
        }
        std::mem::swap(&mut prev_gain, &mut gain);
        std::mem::swap(&mut prev_loss, &mut loss);
        softmax_into(&x_logits, &mut x);
        softmax_into(&y_logits, &mut y);
        for r in 0..rows {
            x_sum[r] += x[r];
        }
        for c in 0..cols {
            y_sum[c] += y[c];
        }

        if iter % 16 == 0 || iter == cfg.max_iter {
            let n = iter as f64;
            for r in 0..rows {
                x_avg[r] = x_sum[r] / n;
            }
            for c in 0..cols {
                y_avg[c] = y_sum[c] / n;
            }
            for cand in [&x, &x_avg] {
                let g = row_guarantee(payoff, cand);
                if g > sol.lower {
                    sol.lower = g;
                    sol.row_strategy.clone_from(cand);
                }
            }
            for cand in [&y, &y_avg] {
                let c = col_concession(payoff, cand);
                if c < sol.upper {
                    sol.upper = c;
                    sol.col_strategy.clone_from(cand);
                }
            }
            sol.iterations = iter;
            if sol.gap() <= cfg.tol {
                sol.value = 0.5 * (sol.lower + sol.upper);
                return Ok(sol);
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        gap: sol.gap(),
        tol: cfg.tol,
    })
}
