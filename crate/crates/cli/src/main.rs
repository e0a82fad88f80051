use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use banditree::complexity::{
    coefficient_report, dec_threshold_scan, gamma_grid, hellinger_separation_level, randomized_coefficient,
    MAX_COEFFICIENT_TASKS,
};
use banditree::dtece::NclsConstant;
use banditree::envsim::{make_hard, make_rand, HardInstanceSpec, RevealCode};
use banditree::game::SolverConfig;
use banditree::harness::{run_experiment, run_trial_with_seed, write_trace_csv, Algo, Bench, ExperimentConfig};
use banditree::metatrain::{meta_train, EstimationMode, MetaTrainConfig};
use banditree::{BanditCollection, SimRng, TestClass};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "banditree", version, about = "Interpretable exploration plans for finite bandit collections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hard,
    Rand,
}

#[derive(Clone, Copy, ValueEnum)]
enum Code {
    Binary,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Constant {
    Proof,
    Algorithm,
}

impl From<Constant> for NclsConstant {
    fn from(c: Constant) -> Self {
        match c {
            Constant::Proof => NclsConstant::Proof,
            Constant::Algorithm => NclsConstant::Algorithm,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a `hard` or `rand` collection.
    GenEnv {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long = "M")]
        m: usize,
        #[arg(long = "K")]
        k: usize,
        #[arg(long, default_value_t = 0.4)]
        lambda: f64,
        /// Decoy gap parameter of `hard` (optimal arm is 3/4 + 10ε).
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Revealing-arm pattern of `hard`.
        #[arg(long, value_enum, default_value = "binary")]
        code: Code,
        #[arg(long)]
        out: PathBuf,
    },
    /// Classification coefficients (and optionally the DEC scan) as JSON.
    Coeffs {
        #[arg(long)]
        env: PathBuf,
        /// Hellinger separation level; the largest one the collection attains when absent.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        dec: bool,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 25.0)]
        gamma_max: f64,
        #[arg(long, default_value_t = 51)]
        gamma_steps: usize,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One seeded trial; writes the per-step cumulative regret.
    Run {
        #[arg(long)]
        algo: String,
        #[arg(long)]
        env: PathBuf,
        #[arg(long, default_value_t = 0)]
        task: usize,
        #[arg(long, default_value_t = 10_000)]
        horizon: usize,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// DT-ECE plan; meta-trained from exact means when absent.
        #[arg(long, requires = "est")]
        tree: Option<PathBuf>,
        #[arg(long, requires = "tree")]
        est: Option<PathBuf>,
        #[arg(long)]
        n_cls: Option<usize>,
        #[arg(long, value_enum, default_value = "proof")]
        constant: Constant,
        /// Accumulate realized instead of expected regret.
        #[arg(long)]
        realized: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the collection from its simulators and build a decision tree.
    MetaTrain {
        #[arg(long)]
        env: PathBuf,
        /// Band of the soft splits; the collection's λ when absent.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long = "H", default_value_t = 10_000)]
        horizon: usize,
        /// Minimum action gap; computed from the collection when absent.
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        n_est: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use exact means instead of simulated estimates.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out_tree: PathBuf,
        #[arg(long)]
        out_est: PathBuf,
        /// Print the tree.
        #[arg(long)]
        render: bool,
    },
    /// Run an experiment grid from a TOML config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenEnv {
            kind,
            m,
            k,
            lambda,
            epsilon,
            seed,
            code,
            out,
        } => gen_env(kind, m, k, lambda, epsilon, seed, code, &out),
        Command::Coeffs {
            env,
            lambda,
            dec,
            epsilon,
            gamma_max,
            gamma_steps,
            grid_step,
            out,
        } => {
            let coll = load(&env)?;
            let lambda = lambda.unwrap_or_else(|| hellinger_level(&coll));
            let solver = SolverConfig::default();
            let report = coefficient_report(&coll, &TestClass::all_arms(&coll), lambda, &solver)?;
            let mut value = serde_json::to_value(&report)?;
            if dec {
                let scan = dec_threshold_scan(&coll, epsilon, lambda, &gamma_grid(gamma_max, gamma_steps), grid_step, &solver)?;
                value["dec"] = serde_json::to_value(&scan)?;
            }
            emit(&(serde_json::to_string_pretty(&value)? + "\n"), out.as_deref())
        }
        Command::Run {
            algo,
            env,
            task,
            horizon,
            delta,
            seed,
            tree,
            est,
            n_cls,
            constant,
            realized,
            out,
        } => {
            let algo: Algo = algo.parse()?;
            let mut cfg = ExperimentConfig::new(&env, vec![algo], horizon);
            cfg.delta = delta;
            cfg.realized = realized;
            cfg.dtece.tree = tree;
            cfg.dtece.est = est;
            cfg.dtece.n_cls = n_cls;
            cfg.dtece.constant = constant.into();
            cfg.validate()?;
            let coll = load(&env)?;
            let bench = Bench::prepare(coll, cfg.env_name(), &cfg)?;
            let trial = run_trial_with_seed(&bench, algo, task, 0, seed)?;
            let mut buf = Vec::new();
            write_trace_csv(&trial.trace, &mut buf)?;
            match &out {
                Some(path) => fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?,
                None => io::stdout().write_all(&buf)?,
            }
            let classified = trial.classified.map_or_else(|| "-".into(), |c| c.to_string());
            eprintln!(
                "{algo} task {task}: final regret {:.3}, classification pulls {}, classified {classified}{}",
                trial.trace.final_value(),
                trial.classification_pulls,
                if trial.truncated { " (truncated)" } else { "" }
            );
            Ok(())
        }
        Command::MetaTrain {
            env,
            lambda,
            horizon,
            gap,
            sigma,
            n_est,
            seed,
            exact,
            out_tree,
            out_est,
            render,
        } => {
            let coll = load(&env)?;
            let cfg = MetaTrainConfig {
                horizon,
                lambda: lambda.unwrap_or(coll.lambda()),
                gap,
                sigma,
                n_est,
                seed,
                mode: if exact { EstimationMode::Exact } else { EstimationMode::Simulate },
            };
            let trained = meta_train(&coll, &cfg)?;
            trained.tree.save(&out_tree)?;
            trained.est.save(&out_est)?;
            if render {
                print!("{}", trained.tree.render());
            }
            eprintln!(
                "tree depth {}, {} internal nodes, {} samples per pair",
                trained.tree.depth(),
                trained.tree.num_internal(),
                trained.est.n_est
            );
            Ok(())
        }
        Command::Experiment { config } => experiment(&config),
    }
}

fn load(path: &Path) -> Result<BanditCollection> {
    BanditCollection::load(path).with_context(|| format!("loading {}", path.display()))
}

fn hellinger_level(coll: &BanditCollection) -> f64 {
    hellinger_separation_level(coll) * (1.0 - 1e-9)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

#[allow(clippy::too_many_arguments)]
fn gen_env(kind: Kind, m: usize, k: usize, lambda: f64, epsilon: f64, seed: u64, code: Code, out: &Path) -> Result<()> {
    let coll = match kind {
        Kind::Hard => {
            let code = match code {
                Code::Binary => RevealCode::BinaryCode,
                Code::Random => RevealCode::RandomBalanced { seed },
            };
            let spec = HardInstanceSpec::new(m, k, epsilon, lambda).with_code(code);
            let coll = make_hard(&spec)?;
            if m <= MAX_COEFFICIENT_TASKS {
                let c = randomized_coefficient(&coll, &TestClass::all_arms(&coll), hellinger_level(&coll), &SolverConfig::default())?;
                if let Some(w) = spec.separation_warning(c) {
                    eprintln!("warning: {w}");
                }
            }
            coll
        }
        Kind::Rand => {
            let (coll, draws) = make_rand(m, k, lambda, &mut SimRng::new(seed, 0))?;
            eprintln!("separated after {draws} draw(s)");
            coll
        }
    };
    coll.save(out).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {} (M={}, K={}, d={})", out.display(), coll.num_tasks(), coll.num_arms(), coll.dim());
    Ok(())
}

fn experiment(path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg: ExperimentConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
    if cfg.output.csv.is_none() && cfg.output.summary.is_none() && cfg.output.curves.is_none() {
        bail!("config sets no outputs; add an [output] table with csv, summary or curves");
    }
    let results = run_experiment(&cfg).with_context(|| format!("running {}", path.display()))?;
    let summary = results.summary(cfg.worst_case)?;
    for (name, s) in &summary.algos {
        let worst = s.worst_case_final.map_or_else(|| "-".into(), |w| format!("{:.2}", w.mean));
        println!(
            "{name:>7}: final regret {:.2} +/- {:.2}, worst case {worst}, pulls {:.1}, misclassified {}",
            s.final_regret.mean, s.final_regret.half_width.unwrap_or(0.0), s.classification_pulls_mean, s.misclassified
        );
    }
    Ok(())
}
