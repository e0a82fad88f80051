//! Seeded regret experiments: run every (algorithm, task, run) trial in a
//! work pool, reduce traces to a checkpoint grid, aggregate confidence
//! intervals and write CSV/JSON.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_mts, run_mucb};
use crate::dtece::{run_dtece, DtEceConfig, NclsConstant};
use crate::ece::{run_ece, EceConfig};
use crate::envsim::BanditCollection;
use crate::metatrain::{meta_train, DecisionTreeClassifier, EstimatedCollection, EstimationMode, MetaTrainConfig, MetaTrained};
use crate::rng::{fnv1a, SimRng};
use crate::trajectory::{Phase, RegretTrace, Step, Trajectory};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "algo,env,task,run,step,cum_regret";
pub const CURVES_HEADER: &str = "algo,env,task,step,n,mean,ci_low,ci_high";
pub const DEFAULT_CHECKPOINTS: usize = 200;
pub const DEFAULT_RUNS: usize = 20;
/// Normal quantile for a two-sided 95% interval.
pub const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Ece,
    Dtece,
    Mucb,
    Mts,
    /// Always plays the true task's optimal arm.
    Oracle,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Ece => "ece",
            Algo::Dtece => "dtece",
            Algo::Mucb => "mucb",
            Algo::Mts => "mts",
            Algo::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ece" => Ok(Algo::Ece),
            "dtece" => Ok(Algo::Dtece),
            "mucb" => Ok(Algo::Mucb),
            "mts" => Ok(Algo::Mts),
            "oracle" => Ok(Algo::Oracle),
            other => Err(Error::InvalidParameter(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// `base ⊕ fnv1a("algo/task/run")`, so adding algorithms or tasks never
/// changes the seeds of existing trials.
pub fn trial_seed(base: u64, algo: Algo, task: usize, run: usize) -> u64 {
    base ^ fnv1a(format!("{}/{}/{}", algo.name(), task, run).as_bytes())
}

/// Up to `n` log-spaced steps in `[1, horizon]`, always including both ends.
pub fn checkpoints(horizon: usize, n: usize) -> Vec<usize> {
    if horizon == 0 || n == 0 {
        return Vec::new();
    }
    if n == 1 || horizon == 1 {
        return vec![horizon];
    }
    let top = (horizon as f64).ln();
    let mut steps: Vec<usize> = (0..n)
        .map(|j| ((top * j as f64 / (n - 1) as f64).exp().round() as usize).clamp(1, horizon))
        .collect();
    steps.push(horizon);
    steps.sort_unstable();
    steps.dedup();
    steps
}

/// Settings for DT-ECE inside an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtEceSettings {
    /// Tree band; the collection's claimed `λ` when absent.
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default = "default_estimation")]
    pub estimation: EstimationMode,
    #[serde(default)]
    pub gap: Option<f64>,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub n_est: Option<usize>,
    #[serde(default)]
    pub train_seed: u64,
    #[serde(default)]
    pub n_cls: Option<usize>,
    #[serde(default)]
    pub constant: NclsConstant,
    /// Pre-built plan; both must be given together.
    #[serde(default)]
    pub tree: Option<PathBuf>,
    #[serde(default)]
    pub est: Option<PathBuf>,
}

fn default_estimation() -> EstimationMode {
    EstimationMode::Exact
}

impl Default for DtEceSettings {
    fn default() -> Self {
        Self {
            lambda: None,
            estimation: default_estimation(),
            gap: None,
            sigma: None,
            n_est: None,
            train_seed: 0,
            n_cls: None,
            constant: NclsConstant::Proof,
            tree: None,
            est: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub summary: Option<PathBuf>,
    #[serde(default)]
    pub curves: Option<PathBuf>,
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

fn default_checkpoints() -> usize {
    DEFAULT_CHECKPOINTS
}

fn default_delta() -> f64 {
    0.05
}

fn default_true() -> bool {
    true
}

/// One experiment grid, as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub env: PathBuf,
    /// Label written to the `env` column; the env file stem when absent.
    #[serde(default)]
    pub name: Option<String>,
    pub algos: Vec<Algo>,
    pub horizon: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Tasks to run; all tasks when absent.
    #[serde(default)]
    pub tasks: Option<Vec<usize>>,
    /// Also report the per-step max over task-mean curves.
    #[serde(default = "default_true")]
    pub worst_case: bool,
    /// Accumulate `max_k x·θ_k − r_t` instead of expected gaps.
    #[serde(default)]
    pub realized: bool,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    /// Confidence parameter for ECE.
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub dtece: DtEceSettings,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn new(env: impl Into<PathBuf>, algos: Vec<Algo>, horizon: usize) -> Self {
        Self {
            env: env.into(),
            name: None,
            algos,
            horizon,
            runs: DEFAULT_RUNS,
            seed: 0,
            tasks: None,
            worst_case: true,
            realized: false,
            checkpoints: DEFAULT_CHECKPOINTS,
            delta: default_delta(),
            dtece: DtEceSettings::default(),
            output: OutputPaths::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        if self.algos.is_empty() {
            return Err(Error::InvalidParameter("no algorithms configured".into()));
        }
        if self.checkpoints == 0 {
            return Err(Error::InvalidParameter("checkpoints must be at least 1".into()));
        }
        if self.dtece.tree.is_some() != self.dtece.est.is_some() {
            return Err(Error::InvalidParameter("dtece.tree and dtece.est must be given together".into()));
        }
        Ok(())
    }

    /// Makes relative paths relative to `base` (usually the config's directory).
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.env);
        for p in [&mut self.dtece.tree, &mut self.dtece.est]
            .into_iter()
            .chain([&mut self.output.csv, &mut self.output.summary, &mut self.output.curves])
            .flatten()
        {
            fix(p);
        }
    }

    pub fn env_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.env
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "env".into())
        })
    }
}

/// Everything a trial needs besides its seed; shared read-only across trials.
#[derive(Debug, Clone)]
pub struct Bench {
    pub coll: BanditCollection,
    pub env: String,
    pub horizon: usize,
    pub realized: bool,
    pub ece: Option<EceConfig>,
    pub plan: Option<MetaTrained>,
    pub dtece: DtEceConfig,
}

impl Bench {
    /// Prepares configs and, for DT-ECE, loads or meta-trains the plan.
    pub fn prepare(coll: BanditCollection, env: String, cfg: &ExperimentConfig) -> Result<Self> {
        let ece = if cfg.algos.contains(&Algo::Ece) {
            Some(EceConfig::for_collection(&coll, cfg.delta)?)
        } else {
            None
        };
        let plan = if cfg.algos.contains(&Algo::Dtece) {
            Some(prepare_plan(&coll, cfg)?)
        } else {
            None
        };
        let dtece = DtEceConfig {
            horizon: cfg.horizon,
            n_cls: cfg.dtece.n_cls,
            constant: cfg.dtece.constant,
        };
        Ok(Self {
            coll,
            env,
            horizon: cfg.horizon,
            realized: cfg.realized,
            ece,
            plan,
            dtece,
        })
    }
}

fn prepare_plan(coll: &BanditCollection, cfg: &ExperimentConfig) -> Result<MetaTrained> {
    let s = &cfg.dtece;
    if let (Some(tree), Some(est)) = (&s.tree, &s.est) {
        let tree = DecisionTreeClassifier::load(tree)?;
        let est = EstimatedCollection::load(est)?;
        est.check_compatible(coll)?;
        return Ok(MetaTrained { est, tree });
    }
    let mt = MetaTrainConfig {
        horizon: cfg.horizon,
        lambda: s.lambda.unwrap_or(coll.lambda()),
        gap: s.gap,
        sigma: s.sigma,
        n_est: s.n_est,
        seed: s.train_seed,
        mode: s.estimation,
    };
    meta_train(coll, &mt)
}

/// Outcome of one seeded trial with the full per-step trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub algo: Algo,
    pub trace: RegretTrace,
    pub classification_pulls: usize,
    /// Task the algorithm committed to, for classify-then-exploit methods.
    pub classified: Option<usize>,
    pub truncated: bool,
}

impl Trial {
    pub fn misclassified(&self) -> bool {
        self.classified.is_some_and(|c| c != self.trace.task)
    }
}

fn oracle_trajectory(coll: &BanditCollection, task: usize, horizon: usize, rng: &mut SimRng) -> Trajectory {
    let mut t = Trajectory::with_capacity(horizon);
    for _ in 0..horizon {
        let context = coll.sample_context_index(rng);
        let arm = coll.optimal_arm(task, context);
        let reward = coll.sample_reward(task, context, arm, rng);
        t.push(Step {
            context,
            arm,
            reward,
            phase: Phase::Exploit,
        });
    }
    t
}

/// Runs one trial with the seed derived from `(base_seed, algo, task, run)`.
pub fn run_trial(bench: &Bench, algo: Algo, task: usize, run: usize, base_seed: u64) -> Result<Trial> {
    let seed = trial_seed(base_seed, algo, task, run);
    run_trial_with_seed(bench, algo, task, run, seed)
}

pub fn run_trial_with_seed(bench: &Bench, algo: Algo, task: usize, run: usize, seed: u64) -> Result<Trial> {
    let coll = &bench.coll;
    coll.check_task(task)?;
    let mut rng = SimRng::new(seed, 0);
    let (trajectory, classified, truncated) = match algo {
        Algo::Ece => {
            let cfg = bench
                .ece
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("ECE was not prepared".into()))?;
            let out = run_ece(coll, task, cfg, bench.horizon, &mut rng)?;
            (out.trajectory, out.classified, out.truncated)
        }
        Algo::Dtece => {
            let plan = bench
                .plan
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("DT-ECE has no plan".into()))?;
            let out = run_dtece(coll, task, &plan.tree, &plan.est, &bench.dtece, &mut rng)?;
            (out.trajectory, out.classified, out.truncated)
        }
        Algo::Mucb => (run_mucb(coll, task, bench.horizon, &mut rng)?, None, false),
        Algo::Mts => (run_mts(coll, task, bench.horizon, &mut rng)?, None, false),
        Algo::Oracle => (oracle_trajectory(coll, task, bench.horizon, &mut rng), Some(task), false),
    };
    let cumulative = if bench.realized {
        trajectory.realized_regret(coll, task)
    } else {
        trajectory.pseudo_regret(coll, task)
    };
    Ok(Trial {
        algo,
        classification_pulls: trajectory.classification_pulls(),
        classified,
        truncated,
        trace: RegretTrace {
            algo: algo.name().into(),
            env: bench.env.clone(),
            task,
            run,
            seed,
            cumulative,
        },
    })
}

/// A trial reduced to the checkpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub algo: Algo,
    pub task: usize,
    pub run: usize,
    pub seed: u64,
    pub values: Vec<f64>,
    pub classification_pulls: usize,
    pub classified: Option<usize>,
    pub truncated: bool,
}

impl TrialSummary {
    fn from_trial(trial: &Trial, grid: &[usize]) -> Self {
        Self {
            algo: trial.algo,
            task: trial.trace.task,
            run: trial.trace.run,
            seed: trial.trace.seed,
            values: grid.iter().map(|&s| trial.trace.at(s)).collect(),
            classification_pulls: trial.classification_pulls,
            classified: trial.classified,
            truncated: trial.truncated,
        }
    }

    pub fn misclassified(&self) -> bool {
        self.classified.is_some_and(|c| c != self.task)
    }
}

/// Trials of an experiment, in `(algo, task, run)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResults {
    pub env: String,
    pub checkpoints: Vec<usize>,
    pub tasks: Vec<usize>,
    pub runs: usize,
    pub trials: Vec<TrialSummary>,
    /// Depth and per-node samples of the DT-ECE plan, when one was used.
    pub tree_depth: Option<usize>,
    pub n_cls: Option<usize>,
}

/// Runs the whole grid in parallel. On failure the trials that finished are
/// returned alongside the first error.
pub fn run_grid(bench: &Bench, cfg: &ExperimentConfig) -> std::result::Result<ExperimentResults, (ExperimentResults, Error)> {
    let tasks: Vec<usize> = cfg.tasks.clone().unwrap_or_else(|| (0..bench.coll.num_tasks()).collect());
    let grid = checkpoints(cfg.horizon, cfg.checkpoints);
    let jobs: Vec<(Algo, usize, usize)> = cfg
        .algos
        .iter()
        .flat_map(|&a| tasks.iter().flat_map(move |&t| (0..cfg.runs).map(move |r| (a, t, r))))
        .collect();
    let outcomes: Vec<Result<TrialSummary>> = jobs
        .par_iter()
        .map(|&(a, t, r)| run_trial(bench, a, t, r, cfg.seed).map(|trial| TrialSummary::from_trial(&trial, &grid)))
        .collect();
    let mut trials = Vec::with_capacity(outcomes.len());
    let mut first_err = None;
    for o in outcomes {
        match o {
            Ok(t) => trials.push(t),
            Err(e) if first_err.is_none() => first_err = Some(e),
            Err(_) => {}
        }
    }
    let results = ExperimentResults {
        env: bench.env.clone(),
        checkpoints: grid,
        tasks,
        runs: cfg.runs,
        trials,
        tree_depth: bench.plan.as_ref().map(|p| p.tree.depth()),
        n_cls: bench.plan.as_ref().map(|p| bench.dtece.resolve_n_cls(&p.tree)),
    };
    match first_err {
        None => Ok(results),
        Some(e) => Err((results, e)),
    }
}

/// Mean with a normal-approximation 95% half-width; the half-width is absent
/// for a single sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CiStat {
    pub n: usize,
    pub mean: f64,
    pub half_width: Option<f64>,
}

impl CiStat {
    pub fn low(&self) -> f64 {
        self.mean - self.half_width.unwrap_or(0.0)
    }

    pub fn high(&self) -> f64 {
        self.mean + self.half_width.unwrap_or(0.0)
    }
}

/// `mean ± 1.96·sd/√n` with the sample standard deviation.
pub fn aggregate(values: &[f64]) -> Result<CiStat> {
    let n = values.len();
    if n == 0 {
        return Err(Error::InvalidParameter("cannot aggregate an empty group".into()));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let half_width = (n >= 2).then(|| {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        Z95 * var.sqrt() / (n as f64).sqrt()
    });
    Ok(CiStat { n, mean, half_width })
}

/// Mean curve with CI per checkpoint for one algorithm and one task, or the
/// worst case over tasks when `task` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub algo: Algo,
    pub task: Option<usize>,
    pub points: Vec<CiStat>,
}

impl ExperimentResults {
    pub fn algos(&self) -> Vec<Algo> {
        let mut algos: Vec<Algo> = Vec::new();
        for t in &self.trials {
            if !algos.contains(&t.algo) {
                algos.push(t.algo);
            }
        }
        algos
    }

    fn group(&self, algo: Algo, task: usize) -> impl Iterator<Item = &TrialSummary> {
        self.trials.iter().filter(move |t| t.algo == algo && t.task == task)
    }

    pub fn task_curve(&self, algo: Algo, task: usize) -> Result<Curve> {
        let members: Vec<&TrialSummary> = self.group(algo, task).collect();
        let points = (0..self.checkpoints.len())
            .map(|c| aggregate(&members.iter().map(|t| t.values[c]).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        Ok(Curve {
            algo,
            task: Some(task),
            points,
        })
    }

    /// Per-checkpoint max over task-mean curves; the interval is that of the
    /// maximizing task.
    pub fn worst_case_curve(&self, algo: Algo) -> Result<Curve> {
        let per_task: Vec<Curve> = self.tasks.iter().map(|&t| self.task_curve(algo, t)).collect::<Result<_>>()?;
        let points = (0..self.checkpoints.len())
            .map(|c| {
                per_task
                    .iter()
                    .map(|curve| curve.points[c])
                    .fold(None::<CiStat>, |best, p| match best {
                        Some(b) if b.mean >= p.mean => Some(b),
                        _ => Some(p),
                    })
                    .expect("at least one task")
            })
            .collect();
        Ok(Curve { algo, task: None, points })
    }

    /// `algo,env,task,run,step,cum_regret` rows in trial order.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for t in &self.trials {
            for (step, v) in self.checkpoints.iter().zip(&t.values) {
                writeln!(w, "{},{},{},{},{},{}", t.algo, self.env, t.task, t.run, step, v)?;
            }
        }
        Ok(())
    }

    /// Aggregated curves; `task` is `worst` for the worst-case rows.
    pub fn write_curves(&self, mut w: impl Write, worst_case: bool) -> Result<()> {
        writeln!(w, "{CURVES_HEADER}")?;
        for algo in self.algos() {
            let mut curves: Vec<Curve> = self.tasks.iter().map(|&t| self.task_curve(algo, t)).collect::<Result<_>>()?;
            if worst_case {
                curves.push(self.worst_case_curve(algo)?);
            }
            for curve in curves {
                let task = curve.task.map_or_else(|| "worst".to_string(), |t| t.to_string());
                for (step, p) in self.checkpoints.iter().zip(&curve.points) {
                    writeln!(w, "{},{},{},{},{},{},{},{}", algo, self.env, task, step, p.n, p.mean, p.low(), p.high())?;
                }
            }
        }
        Ok(())
    }

    pub fn summary(&self, worst_case: bool) -> Result<Summary> {
        let mut algos = BTreeMap::new();
        for algo in self.algos() {
            let trials: Vec<&TrialSummary> = self.trials.iter().filter(|t| t.algo == algo).collect();
            let mut per_task = BTreeMap::new();
            for &task in &self.tasks {
                let finals: Vec<f64> = self.group(algo, task).filter_map(|t| t.values.last().copied()).collect();
                per_task.insert(task.to_string(), aggregate(&finals)?);
            }
            let pulls: Vec<f64> = trials.iter().map(|t| t.classification_pulls as f64).collect();
            let all_finals: Vec<f64> = trials.iter().filter_map(|t| t.values.last().copied()).collect();
            algos.insert(
                algo.name().to_string(),
                AlgoSummary {
                    trials: trials.len(),
                    final_regret: aggregate(&all_finals)?,
                    final_regret_per_task: per_task,
                    worst_case_final: if worst_case {
                        self.worst_case_curve(algo)?.points.last().copied()
                    } else {
                        None
                    },
                    classification_pulls_mean: aggregate(&pulls)?.mean,
                    classification_pulls_max: trials.iter().map(|t| t.classification_pulls).max().unwrap_or(0),
                    misclassified: trials.iter().filter(|t| t.misclassified()).count(),
                    truncated: trials.iter().filter(|t| t.truncated).count(),
                },
            );
        }
        Ok(Summary {
            env: self.env.clone(),
            horizon: self.checkpoints.last().copied().unwrap_or(0),
            runs: self.runs,
            tasks: self.tasks.clone(),
            tree_depth: self.tree_depth,
            n_cls: self.n_cls,
            algos,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgoSummary {
    pub trials: usize,
    pub final_regret: CiStat,
    pub final_regret_per_task: BTreeMap<String, CiStat>,
    pub worst_case_final: Option<CiStat>,
    pub classification_pulls_mean: f64,
    pub classification_pulls_max: usize,
    pub misclassified: usize,
    pub truncated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub env: String,
    pub horizon: usize,
    pub runs: usize,
    pub tasks: Vec<usize>,
    pub tree_depth: Option<usize>,
    pub n_cls: Option<usize>,
    pub algos: BTreeMap<String, AlgoSummary>,
}

/// Loads the env, runs the grid and writes every configured output. Trials
/// that finished are still written when a later one fails.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResults> {
    cfg.validate()?;
    let coll = BanditCollection::load(&cfg.env)?;
    let bench = Bench::prepare(coll, cfg.env_name(), cfg)?;
    let (results, err) = match run_grid(&bench, cfg) {
        Ok(r) => (r, None),
        Err((r, e)) => (r, Some(e)),
    };
    write_outputs(&results, cfg)?;
    match err {
        None => Ok(results),
        Some(e) => Err(e),
    }
}

pub fn write_outputs(results: &ExperimentResults, cfg: &ExperimentConfig) -> Result<()> {
    if let Some(path) = &cfg.output.csv {
        let mut buf = Vec::new();
        results.write_csv(&mut buf)?;
        write_file(path, &buf)?;
    }
    if results.trials.is_empty() {
        return Ok(());
    }
    if let Some(path) = &cfg.output.curves {
        let mut buf = Vec::new();
        results.write_curves(&mut buf, cfg.worst_case)?;
        write_file(path, &buf)?;
    }
    if let Some(path) = &cfg.output.summary {
        let summary = results.summary(cfg.worst_case)?;
        write_file(path, (serde_json::to_string_pretty(&summary)? + "\n").as_bytes())?;
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(std::fs::write(path, bytes)?)
}

/// Per-step CSV of a single trace, in the experiment schema.
pub fn write_trace_csv(trace: &RegretTrace, mut w: impl Write) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (i, v) in trace.cumulative.iter().enumerate() {
        writeln!(w, "{},{},{},{},{},{}", trace.algo, trace.env, trace.task, trace.run, i + 1, v)?;
    }
    Ok(())
}
