use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{build_tree, DecisionTreeClassifier};
use crate::envsim::{argmax, dot, BanditCollection};
use crate::rng::SimRng;
use crate::{Error, Result};

const RIDGE: f64 = 1e-8;

/// Estimated means outside this band indicate a broken simulator, not noise.
const SANITY_LO: f64 = -0.5;
const SANITY_HI: f64 = 1.5;

/// Per-(task, arm) parameter and mean estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedCollection {
    /// `theta[i][k]` is `θ̂_ik ∈ ℝ^d`.
    pub theta: Vec<Vec<Vec<f64>>>,
    /// `mu[i][k]` is the sample mean of the rewards drawn for `(i, k)`.
    pub mu: Vec<Vec<f64>>,
    /// Samples per pair; 0 for exact (noise-free) estimates.
    pub n_est: usize,
    pub seed: Option<u64>,
    pub total_samples: u64,
}

impl EstimatedCollection {
    /// The zero-noise limit: `θ̂ = θ` and `μ̂ = μ`.
    pub fn exact(coll: &BanditCollection) -> Self {
        let theta = coll
            .instances()
            .iter()
            .map(|inst| (0..inst.num_arms()).map(|k| inst.theta(k).to_vec()).collect())
            .collect();
        Self {
            theta,
            mu: coll.mean_table().to_vec(),
            n_est: 0,
            seed: None,
            total_samples: 0,
        }
    }

    pub fn num_tasks(&self) -> usize {
        self.mu.len()
    }

    pub fn num_arms(&self) -> usize {
        self.mu.first().map_or(0, Vec::len)
    }

    pub fn dim(&self) -> usize {
        self.theta.first().and_then(|t| t.first()).map_or(0, Vec::len)
    }

    pub fn mu(&self, task: usize, arm: usize) -> f64 {
        self.mu[task][arm]
    }

    pub fn theta(&self, task: usize, arm: usize) -> &[f64] {
        &self.theta[task][arm]
    }

    /// `argmax_k x · θ̂_{task,k}`, lowest index on ties.
    pub fn exploit_arm(&self, task: usize, x: &[f64]) -> usize {
        let values: Vec<f64> = self.theta[task].iter().map(|t| dot(x, t)).collect();
        argmax(&values)
    }

    fn validate(&self) -> Result<()> {
        let m = self.num_tasks();
        let k = self.num_arms();
        let d = self.dim();
        if m == 0 || k == 0 || d == 0 {
            return Err(Error::Format("estimated collection is empty".into()));
        }
        if self.theta.len() != m
            || self.mu.iter().any(|row| row.len() != k)
            || self.theta.iter().any(|row| row.len() != k || row.iter().any(|t| t.len() != d))
        {
            return Err(Error::Format("estimated collection is ragged".into()));
        }
        if let Some(v) = self.mu.iter().flatten().find(|v| !(SANITY_LO..=SANITY_HI).contains(*v)) {
            return Err(Error::Format(format!("estimated mean {v} outside [{SANITY_LO}, {SANITY_HI}]")));
        }
        Ok(())
    }

    /// Errors unless the estimate has the collection's `(M, K, d)`.
    pub fn check_compatible(&self, coll: &BanditCollection) -> Result<()> {
        if (self.num_tasks(), self.num_arms(), self.dim()) != (coll.num_tasks(), coll.num_arms(), coll.dim()) {
            return Err(Error::Format(format!(
                "estimate is {}x{}x{}, collection is {}x{}x{}",
                self.num_tasks(),
                self.num_arms(),
                self.dim(),
                coll.num_tasks(),
                coll.num_arms(),
                coll.dim()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let est: Self = serde_json::from_str(text)?;
        est.validate()?;
        Ok(est)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `⌈160 σ² d ln(4HMK) / min(Δ², λ²)⌉`.
pub fn n_est_formula(sigma: f64, dim: usize, horizon: usize, num_tasks: usize, num_arms: usize, gap: f64, lambda: f64) -> Result<usize> {
    if !(sigma > 0.0) || dim == 0 || horizon == 0 || num_tasks == 0 || num_arms == 0 {
        return Err(Error::InvalidParameter("sigma, d, H, M and K must be positive".into()));
    }
    if !(gap > 0.0) || !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("gap {gap} and lambda {lambda} must be positive")));
    }
    let log = (4.0 * horizon as f64 * num_tasks as f64 * num_arms as f64).ln();
    let n = 160.0 * sigma * sigma * dim as f64 * log / (gap * gap).min(lambda * lambda);
    Ok(n.ceil() as usize)
}

/// Draws `n_est` contexts and rewards for `(task, arm)` and returns the ridge
/// least-squares `θ̂` together with the sample mean `μ̂`.
pub fn estimate_task_arm(coll: &BanditCollection, task: usize, arm: usize, n_est: usize, rng: &mut SimRng) -> Result<(Vec<f64>, f64)> {
    coll.check_task(task)?;
    coll.check_arm(arm)?;
    let d = coll.dim();
    if n_est < d {
        return Err(Error::InvalidParameter(format!("n_est {n_est} is below the dimension {d}")));
    }
    // X is d×N, so XXᵀ is accumulated as a sum of outer products.
    let mut gram = DMatrix::<f64>::identity(d, d) * RIDGE;
    let mut xr = DVector::<f64>::zeros(d);
    let mut total = 0.0;
    for _ in 0..n_est {
        let c = coll.sample_context_index(rng);
        let r = coll.sample_reward(task, c, arm, rng);
        let x = DVector::from_column_slice(coll.context().context(c));
        gram.ger(1.0, &x, &x, 1.0);
        xr.axpy(r, &x, 1.0);
        total += r;
    }
    let theta = match gram.clone().cholesky() {
        Some(chol) => chol.solve(&xr),
        None => gram
            .lu()
            .solve(&xr)
            .ok_or_else(|| Error::InvalidParameter("singular design matrix".into()))?,
    };
    Ok((theta.iter().copied().collect(), total / n_est as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimationMode {
    /// Sample every pair from its simulator.
    #[default]
    Simulate,
    /// Use the exact parameters (zero-noise limit).
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaTrainConfig {
    pub horizon: usize,
    /// Band width of the tree's soft splits.
    pub lambda: f64,
    /// Minimum action gap; computed from the collection when absent.
    pub gap: Option<f64>,
    /// Sub-Gaussian noise scale; the largest arm scale when absent.
    pub sigma: Option<f64>,
    /// Overrides the sample-size formula.
    pub n_est: Option<usize>,
    pub seed: u64,
    pub mode: EstimationMode,
}

impl MetaTrainConfig {
    pub fn new(horizon: usize, lambda: f64, seed: u64) -> Self {
        Self {
            horizon,
            lambda,
            gap: None,
            sigma: None,
            n_est: None,
            seed,
            mode: EstimationMode::Simulate,
        }
    }

    pub fn exact(horizon: usize, lambda: f64) -> Self {
        Self {
            mode: EstimationMode::Exact,
            ..Self::new(horizon, lambda, 0)
        }
    }

    /// Samples per pair this configuration uses on `coll`.
    pub fn resolve_n_est(&self, coll: &BanditCollection) -> Result<usize> {
        if let Some(n) = self.n_est {
            return Ok(n.max(coll.dim()));
        }
        let gap = match self.gap {
            Some(g) => g,
            None => coll
                .min_action_gap()
                .ok_or_else(|| Error::InvalidParameter("collection has no positive action gap; pass one explicitly".into()))?,
        };
        let sigma = self.sigma.unwrap_or_else(|| {
            coll.instances()
                .iter()
                .flat_map(|inst| (0..inst.num_arms()).map(move |k| inst.noise(k).sigma()))
                .fold(0.0, f64::max)
        });
        let n = n_est_formula(sigma, coll.dim(), self.horizon, coll.num_tasks(), coll.num_arms(), gap, self.lambda)?;
        Ok(n.max(coll.dim()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaTrained {
    pub est: EstimatedCollection,
    pub tree: DecisionTreeClassifier,
}

/// Estimates every `(task, arm)` pair and builds the tree on the estimates.
pub fn meta_train(coll: &BanditCollection, cfg: &MetaTrainConfig) -> Result<MetaTrained> {
    let est = match cfg.mode {
        EstimationMode::Exact => EstimatedCollection::exact(coll),
        EstimationMode::Simulate => estimate_collection(coll, cfg)?,
    };
    let tree = build_tree(&est, cfg.lambda)?;
    Ok(MetaTrained { est, tree })
}

fn estimate_collection(coll: &BanditCollection, cfg: &MetaTrainConfig) -> Result<EstimatedCollection> {
    let n_est = cfg.resolve_n_est(coll)?;
    let (m, k) = (coll.num_tasks(), coll.num_arms());
    let pairs: Vec<(Vec<f64>, f64)> = (0..m * k)
        .into_par_iter()
        .map(|p| {
            let mut rng = SimRng::new(cfg.seed, p as u64 + 1);
            estimate_task_arm(coll, p / k, p % k, n_est, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut theta = vec![Vec::with_capacity(k); m];
    let mut mu = vec![Vec::with_capacity(k); m];
    for (p, (t, u)) in pairs.into_iter().enumerate() {
        theta[p / k].push(t);
        mu[p / k].push(u);
    }
    let est = EstimatedCollection {
        theta,
        mu,
        n_est,
        seed: Some(cfg.seed),
        total_samples: (m * k * n_est) as u64,
    };
    est.validate()?;
    Ok(est)
}
