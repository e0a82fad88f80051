//! Bandit collections, context distributions and instance generators.
//!
//! A [`BanditCollection`] holds `M` linear contextual bandits sharing `K` arms,
//! a feature dimension `d` and a finite-support [`ContextDistribution`]. The
//! reward of arm `k` in task `i` under context `x` has mean `x · θ_ik`, which
//! must lie in `[0, 1]` for every support context.
//!
//! Task and arm indices are zero-based everywhere in the crate and in files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complexity::test_hellinger_sq;
use crate::rng::SimRng;
use crate::{Error, Result};

/// Bound on `‖x‖₁` checked for every support vector unless overridden.
pub const DEFAULT_L1_BOUND: f64 = 1e3;

const MEAN_TOL: f64 = 1e-12;

/// Finite-support categorical distribution over context vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextDistribution {
    support: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl ContextDistribution {
    pub fn new(support: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        Self::with_l1_bound(support, weights, DEFAULT_L1_BOUND)
    }

    pub fn with_l1_bound(support: Vec<Vec<f64>>, weights: Vec<f64>, l1_bound: f64) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCollection(msg));
        if support.is_empty() {
            return bad("context support is empty".into());
        }
        if support.len() != weights.len() {
            return bad(format!(
                "{} support vectors but {} weights",
                support.len(),
                weights.len()
            ));
        }
        let d = support[0].len();
        if d == 0 {
            return bad("context dimension is zero".into());
        }
        for (c, x) in support.iter().enumerate() {
            if x.len() != d {
                return bad(format!("context {c} has dimension {} (expected {d})", x.len()));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return bad(format!("context {c} is not finite"));
            }
            let l1: f64 = x.iter().map(|v| v.abs()).sum();
            if l1 > l1_bound {
                return bad(format!("context {c} has l1 norm {l1} above bound {l1_bound}"));
            }
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return bad("context weights must be nonnegative".into());
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return bad(format!("context weights sum to {total}"));
        }
        Ok(Self { support, weights })
    }

    /// The non-contextual case: a single context `x = (1)`.
    pub fn singleton() -> Self {
        Self {
            support: vec![vec![1.0]],
            weights: vec![1.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.support[0].len()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn context(&self, idx: usize) -> &[f64] {
        &self.support[idx]
    }

    /// Draws the index of a support vector.
    pub fn sample_index(&self, rng: &mut SimRng) -> usize {
        if self.support.len() == 1 {
            return 0;
        }
        rng.categorical(&self.weights)
    }

    /// `E_P[f(x)]` over the finite support.
    pub fn expect(&self, mut f: impl FnMut(usize) -> f64) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(c, w)| w * f(c))
            .sum()
    }
}

/// Draws a context vector from `dist`.
pub fn sample_context<'a>(dist: &'a ContextDistribution, rng: &mut SimRng) -> &'a [f64] {
    dist.context(dist.sample_index(rng))
}

/// Reward-noise family of one arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Noise {
    /// Reward is 0/1 with success probability `x · θ`.
    Bernoulli,
    /// Reward is `x · θ + N(0, σ²)`; the payload is σ.
    Gaussian(f64),
}

impl Noise {
    /// Sub-Gaussian scale of the noise.
    pub fn sigma(&self) -> f64 {
        match self {
            Noise::Bernoulli => 0.5,
            Noise::Gaussian(s) => *s,
        }
    }

    pub fn dist(&self, mean: f64) -> RewardDist {
        match *self {
            Noise::Bernoulli => RewardDist::Bernoulli(mean),
            Noise::Gaussian(sigma) => RewardDist::Gaussian { mean, sigma },
        }
    }
}

/// A concrete reward distribution for one (task, context, arm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RewardDist {
    Bernoulli(f64),
    Gaussian { mean: f64, sigma: f64 },
}

impl RewardDist {
    pub fn mean(&self) -> f64 {
        match *self {
            RewardDist::Bernoulli(p) => p,
            RewardDist::Gaussian { mean, .. } => mean,
        }
    }

    pub fn sample(&self, rng: &mut SimRng) -> f64 {
        match *self {
            RewardDist::Bernoulli(p) => {
                if rng.bernoulli(p) {
                    1.0
                } else {
                    0.0
                }
            }
            RewardDist::Gaussian { mean, sigma } => {
                if sigma == 0.0 {
                    mean
                } else {
                    mean + sigma * rng.standard_normal()
                }
            }
        }
    }
}

/// One linear contextual bandit: `K` parameter vectors and per-arm noise.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    theta: Vec<Vec<f64>>,
    noise: Vec<Noise>,
}

impl BanditInstance {
    pub fn new(theta: Vec<Vec<f64>>, noise: Vec<Noise>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidCollection("instance has no arms".into()));
        }
        if noise.len() != theta.len() {
            return Err(Error::InvalidCollection(format!(
                "{} arms but {} noise entries",
                theta.len(),
                noise.len()
            )));
        }
        let d = theta[0].len();
        if theta.iter().any(|t| t.len() != d || t.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidCollection("ragged or non-finite theta".into()));
        }
        for n in &noise {
            if let Noise::Gaussian(s) = n {
                if !s.is_finite() || *s < 0.0 {
                    return Err(Error::InvalidCollection(format!("invalid gaussian sigma {s}")));
                }
            }
        }
        Ok(Self { theta, noise })
    }

    /// Non-contextual Bernoulli instance with the given arm means.
    pub fn bernoulli(means: &[f64]) -> Result<Self> {
        Self::new(
            means.iter().map(|&m| vec![m]).collect(),
            vec![Noise::Bernoulli; means.len()],
        )
    }

    pub fn num_arms(&self) -> usize {
        self.theta.len()
    }

    pub fn dim(&self) -> usize {
        self.theta[0].len()
    }

    pub fn theta(&self, arm: usize) -> &[f64] {
        &self.theta[arm]
    }

    pub fn noise(&self, arm: usize) -> Noise {
        self.noise[arm]
    }

    /// `x · θ_k`.
    pub fn mean_at(&self, x: &[f64], arm: usize) -> f64 {
        dot(x, &self.theta[arm])
    }
}

/// Draws a reward from arm `k` of `inst` under context `x`.
pub fn sample_reward(inst: &BanditInstance, x: &[f64], k: usize, rng: &mut SimRng) -> Result<f64> {
    if k >= inst.num_arms() {
        return Err(Error::ArmOutOfRange {
            arm: k,
            num_arms: inst.num_arms(),
        });
    }
    Ok(inst.noise[k].dist(inst.mean_at(x, k)).sample(rng))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The family of `M` bandits together with the shared context distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditCollection {
    instances: Vec<BanditInstance>,
    context: ContextDistribution,
    lambda: f64,
    // [task][context][arm] -> x · θ
    ctx_means: Vec<Vec<Vec<f64>>>,
    // [task][arm] -> E_P[x · θ]
    means: Vec<Vec<f64>>,
}

impl BanditCollection {
    pub fn new(instances: Vec<BanditInstance>, context: ContextDistribution, lambda: f64) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::InvalidCollection("collection is empty".into()));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidCollection(format!("lambda {lambda} outside (0, 1)")));
        }
        let k = instances[0].num_arms();
        let d = context.dim();
        for (i, inst) in instances.iter().enumerate() {
            if inst.num_arms() != k {
                return Err(Error::InvalidCollection(format!(
                    "instance {i} has {} arms (expected {k})",
                    inst.num_arms()
                )));
            }
            if inst.dim() != d {
                return Err(Error::InvalidCollection(format!(
                    "instance {i} has dimension {} (context dimension {d})",
                    inst.dim()
                )));
            }
        }
        let ctx_means: Vec<Vec<Vec<f64>>> = instances
            .iter()
            .map(|inst| {
                context
                    .support()
                    .iter()
                    .map(|x| (0..k).map(|a| inst.mean_at(x, a)).collect())
                    .collect()
            })
            .collect();
        for (i, per_ctx) in ctx_means.iter().enumerate() {
            for (c, row) in per_ctx.iter().enumerate() {
                for (a, &m) in row.iter().enumerate() {
                    if !(-MEAN_TOL..=1.0 + MEAN_TOL).contains(&m) {
                        return Err(Error::InvalidCollection(format!(
                            "task {i}, context {c}, arm {a}: mean {m} outside [0, 1]"
                        )));
                    }
                }
            }
        }
        let means = ctx_means
            .iter()
            .map(|per_ctx| {
                (0..k)
                    .map(|a| context.expect(|c| per_ctx[c][a]))
                    .collect()
            })
            .collect();
        Ok(Self {
            instances,
            context,
            lambda,
            ctx_means,
            means,
        })
    }

    /// Non-contextual Bernoulli collection from a `M × K` mean table.
    pub fn bernoulli(means: &[Vec<f64>], lambda: f64) -> Result<Self> {
        let instances = means
            .iter()
            .map(|row| BanditInstance::bernoulli(row))
            .collect::<Result<Vec<_>>>()?;
        Self::new(instances, ContextDistribution::singleton(), lambda)
    }

    pub fn num_tasks(&self) -> usize {
        self.instances.len()
    }

    pub fn num_arms(&self) -> usize {
        self.instances[0].num_arms()
    }

    pub fn dim(&self) -> usize {
        self.context.dim()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn context(&self) -> &ContextDistribution {
        &self.context
    }

    pub fn instances(&self) -> &[BanditInstance] {
        &self.instances
    }

    pub fn instance(&self, task: usize) -> &BanditInstance {
        &self.instances[task]
    }

    /// `μ_ik = E_P[x · θ_ik]`, exact over the finite support.
    pub fn mean_reward(&self, task: usize, arm: usize) -> f64 {
        self.means[task][arm]
    }

    pub fn mean_table(&self) -> &[Vec<f64>] {
        &self.means
    }

    /// `x_c · θ_ik` for support context `c`.
    pub fn context_mean(&self, task: usize, ctx: usize, arm: usize) -> f64 {
        self.ctx_means[task][ctx][arm]
    }

    pub fn reward_dist(&self, task: usize, ctx: usize, arm: usize) -> RewardDist {
        self.instances[task].noise[arm].dist(self.ctx_means[task][ctx][arm])
    }

    pub fn sample_context_index(&self, rng: &mut SimRng) -> usize {
        self.context.sample_index(rng)
    }

    pub fn sample_reward(&self, task: usize, ctx: usize, arm: usize, rng: &mut SimRng) -> f64 {
        self.reward_dist(task, ctx, arm).sample(rng)
    }

    /// Optimal arm of `task` under support context `ctx` (lowest index on ties).
    pub fn optimal_arm(&self, task: usize, ctx: usize) -> usize {
        argmax(&self.ctx_means[task][ctx])
    }

    /// Arm with the highest context-averaged mean.
    pub fn best_mean_arm(&self, task: usize) -> usize {
        argmax(&self.means[task])
    }

    /// `E_P[max_k x · θ_ik]`.
    pub fn optimal_value(&self, task: usize) -> f64 {
        self.context.expect(|c| {
            let row = &self.ctx_means[task][c];
            row[argmax(row)]
        })
    }

    pub fn check_task(&self, task: usize) -> Result<()> {
        if task >= self.num_tasks() {
            return Err(Error::TaskOutOfRange {
                task,
                num_tasks: self.num_tasks(),
            });
        }
        Ok(())
    }

    pub fn check_arm(&self, arm: usize) -> Result<()> {
        if arm >= self.num_arms() {
            return Err(Error::ArmOutOfRange {
                arm,
                num_arms: self.num_arms(),
            });
        }
        Ok(())
    }

    /// Smallest positive action gap `min_{i,x,k} Δ_i(x, k)` over suboptimal arms.
    pub fn min_action_gap(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for per_ctx in &self.ctx_means {
            for (c, row) in per_ctx.iter().enumerate() {
                if self.context.weights()[c] <= 0.0 {
                    continue;
                }
                let top = row[argmax(row)];
                for &m in row {
                    let gap = top - m;
                    if gap > MEAN_TOL {
                        best = Some(best.map_or(gap, |b| b.min(gap)));
                    }
                }
            }
        }
        best
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CollectionFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CollectionFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NoiseSpec {
    Shared(Noise),
    PerArm(Vec<Noise>),
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    theta: Vec<Vec<f64>>,
    noise: NoiseSpec,
}

#[derive(Serialize, Deserialize)]
struct ContextFile {
    support: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct CollectionFile {
    M: usize,
    K: usize,
    d: usize,
    context: ContextFile,
    instances: Vec<InstanceFile>,
    lambda: f64,
}

impl From<&BanditCollection> for CollectionFile {
    fn from(coll: &BanditCollection) -> Self {
        let instances = coll
            .instances
            .iter()
            .map(|inst| {
                let first = inst.noise[0];
                let noise = if inst.noise.iter().all(|n| *n == first) {
                    NoiseSpec::Shared(first)
                } else {
                    NoiseSpec::PerArm(inst.noise.clone())
                };
                InstanceFile {
                    theta: inst.theta.clone(),
                    noise,
                }
            })
            .collect();
        CollectionFile {
            M: coll.num_tasks(),
            K: coll.num_arms(),
            d: coll.dim(),
            context: ContextFile {
                support: coll.context.support.clone(),
                weights: coll.context.weights.clone(),
            },
            instances,
            lambda: coll.lambda,
        }
    }
}

impl TryFrom<CollectionFile> for BanditCollection {
    type Error = Error;

    fn try_from(file: CollectionFile) -> Result<Self> {
        let context = ContextDistribution::new(file.context.support, file.context.weights)?;
        let instances = file
            .instances
            .into_iter()
            .map(|inst| {
                let noise = match inst.noise {
                    NoiseSpec::Shared(n) => vec![n; inst.theta.len()],
                    NoiseSpec::PerArm(v) => v,
                };
                BanditInstance::new(inst.theta, noise)
            })
            .collect::<Result<Vec<_>>>()?;
        let coll = BanditCollection::new(instances, context, file.lambda)?;
        if coll.num_tasks() != file.M || coll.num_arms() != file.K || coll.dim() != file.d {
            return Err(Error::Format(format!(
                "header (M={}, K={}, d={}) disagrees with body (M={}, K={}, d={})",
                file.M,
                file.K,
                file.d,
                coll.num_tasks(),
                coll.num_arms(),
                coll.dim()
            )));
        }
        Ok(coll)
    }
}

/// Pattern used to assign information-revealing arm means in `hard` instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevealCode {
    /// Revealing arm `M + b` carries bit `b mod ⌈log₂ M⌉` of the task index.
    BinaryCode,
    /// Each revealing arm splits the tasks into random halves.
    RandomBalanced { seed: u64 },
}

/// Parameters of the `hard` construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HardInstanceSpec {
    pub num_tasks: usize,
    pub num_arms: usize,
    pub epsilon: f64,
    pub lambda: f64,
    pub code: RevealCode,
}

impl HardInstanceSpec {
    pub fn new(num_tasks: usize, num_arms: usize, epsilon: f64, lambda: f64) -> Self {
        Self {
            num_tasks,
            num_arms,
            epsilon,
            lambda,
            code: RevealCode::BinaryCode,
        }
    }

    pub fn with_code(mut self, code: RevealCode) -> Self {
        self.code = code;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.num_tasks;
        if m == 0 {
            return Err(Error::InvalidParameter("M must be at least 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon {} must be positive", self.epsilon)));
        }
        if 0.75 + 10.0 * self.epsilon > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon {} pushes the optimal mean above 1",
                self.epsilon
            )));
        }
        // Revealing means (1 ± λ)/2 must stay at or below the decoy mean 3/4,
        // otherwise the optimal arm is no longer unique with gap 10ε.
        if !(self.lambda > 0.0 && self.lambda <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "lambda {} outside (0, 1/2]",
                self.lambda
            )));
        }
        let required = self.required_arms();
        if self.num_arms < required {
            return Err(Error::TooFewArms {
                num_arms: self.num_arms,
                num_tasks: m,
                required,
            });
        }
        Ok(())
    }

    fn code_bits(&self) -> usize {
        ceil_log2(self.num_tasks)
    }

    pub fn required_arms(&self) -> usize {
        let m = self.num_tasks;
        match self.code {
            RevealCode::BinaryCode => m + self.code_bits(),
            RevealCode::RandomBalanced { .. } => {
                if m > 1 {
                    m + 1
                } else {
                    m
                }
            }
        }
    }

    /// Warning text when `λ² ≤ 10 · ε · C̃`, the regime where the construction's
    /// lower-bound argument needs a larger separation.
    pub fn separation_warning(&self, randomized_coefficient: f64) -> Option<String> {
        let bound = 10.0 * self.epsilon * randomized_coefficient;
        (self.lambda * self.lambda <= bound).then(|| {
            format!(
                "lambda^2 = {:.4} <= 10 * epsilon * C~ = {:.4}; the hard-instance regime assumes a larger separation",
                self.lambda * self.lambda,
                bound
            )
        })
    }
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Builds the non-contextual Bernoulli `hard` collection.
pub fn make_hard(spec: &HardInstanceSpec) -> Result<BanditCollection> {
    spec.validate()?;
    let m = spec.num_tasks;
    let k = spec.num_arms;
    let eps = spec.epsilon;
    let high = (1.0 + spec.lambda) / 2.0;
    let low = (1.0 - spec.lambda) / 2.0;

    let mut means = vec![vec![0.0; k]; m];
    for (i, row) in means.iter_mut().enumerate() {
        for (a, slot) in row.iter_mut().take(m).enumerate() {
            *slot = if a == i { 0.75 + 10.0 * eps } else { 0.75 };
        }
    }

    let revealing = k - m;
    match spec.code {
        RevealCode::BinaryCode => {
            let bits = spec.code_bits();
            for j in 0..revealing {
                for (i, row) in means.iter_mut().enumerate() {
                    let set = bits > 0 && (i >> (j % bits)) & 1 == 1;
                    row[m + j] = if set { low } else { high };
                }
            }
        }
        RevealCode::RandomBalanced { seed } => {
            let mut rng = SimRng::new(seed, 0);
            let mut order: Vec<usize> = (0..m).collect();
            for j in 0..revealing {
                rng.shuffle(&mut order);
                for (pos, &i) in order.iter().enumerate() {
                    means[i][m + j] = if pos < m.div_ceil(2) { high } else { low };
                }
            }
        }
    }
    BanditCollection::bernoulli(&means, spec.lambda)
}

/// Default cap on whole-collection redraws in [`make_rand`].
pub const DEFAULT_MAX_RETRIES: usize = 10_000;

/// Random Bernoulli collection with means uniform in `[0.05, 0.95]`, redrawn
/// until [`check_separation`] passes. Returns the collection and the number of
/// draws it took.
pub fn make_rand(num_tasks: usize, num_arms: usize, lambda: f64, rng: &mut SimRng) -> Result<(BanditCollection, usize)> {
    make_rand_with_retries(num_tasks, num_arms, lambda, rng, DEFAULT_MAX_RETRIES)
}

pub fn make_rand_with_retries(
    num_tasks: usize,
    num_arms: usize,
    lambda: f64,
    rng: &mut SimRng,
    max_retries: usize,
) -> Result<(BanditCollection, usize)> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda {lambda} outside (0, 1)")));
    }
    if num_tasks == 0 || num_arms == 0 {
        return Err(Error::InvalidParameter("M and K must be positive".into()));
    }
    for attempt in 1..=max_retries {
        let means: Vec<Vec<f64>> = (0..num_tasks)
            .map(|_| (0..num_arms).map(|_| 0.05 + 0.9 * rng.uniform()).collect())
            .collect();
        let coll = BanditCollection::bernoulli(&means, lambda)?;
        if check_separation(&coll, lambda).separated {
            return Ok((coll, attempt));
        }
    }
    Err(Error::SeparationUnsatisfiable {
        lambda,
        attempts: max_retries,
    })
}

/// Outcome of a mean-separation check.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub separated: bool,
    /// For each separated pair `(i, j)` with `i < j`, the lowest arm with
    /// `|μ_ik − μ_jk| > λ`.
    pub witnesses: BTreeMap<(usize, usize), usize>,
}

/// Strict mean separation: every pair differs by more than `λ` on some arm.
/// Pairs whose best gap equals `λ` exactly fail.
pub fn check_separation(coll: &BanditCollection, lambda: f64) -> SeparationReport {
    let m = coll.num_tasks();
    let mut witnesses = BTreeMap::new();
    let mut separated = true;
    for i in 0..m {
        for j in i + 1..m {
            let arm = (0..coll.num_arms())
                .find(|&a| (coll.mean_reward(i, a) - coll.mean_reward(j, a)).abs() > lambda);
            match arm {
                Some(a) => {
                    witnesses.insert((i, j), a);
                }
                None => separated = false,
            }
        }
    }
    SeparationReport { separated, witnesses }
}

/// Hellinger separation over single-arm tests: every pair has an arm whose
/// joint context-reward distributions satisfy `hellinger_sq ≥ λ²`.
pub fn check_hellinger_separation(coll: &BanditCollection, lambda: f64) -> bool {
    let m = coll.num_tasks();
    let threshold = lambda * lambda;
    (0..m).all(|i| {
        (i + 1..m).all(|j| (0..coll.num_arms()).any(|a| test_hellinger_sq(coll, i, j, a) >= threshold))
    })
}
