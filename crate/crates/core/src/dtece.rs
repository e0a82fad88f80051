//! Decision-tree classify then exploit: walk a meta-trained tree with
//! empirical-mean tests, then play the estimated policy of the reached leaf.

use serde::{Deserialize, Serialize};

use crate::envsim::BanditCollection;
use crate::metatrain::{DecisionTreeClassifier, EstimatedCollection, Node};
use crate::rng::SimRng;
use crate::trajectory::{Phase, Step, Trajectory};
use crate::{Error, Result};

/// Which constant enters the default per-node sample count `⌈2 ln(c·H·D)/λ²⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NclsConstant {
    /// `c = 8`, what the regret analysis needs.
    #[default]
    Proof,
    /// `c = 2`, the smaller count stated with the algorithm.
    Algorithm,
}

impl NclsConstant {
    fn factor(self) -> f64 {
        match self {
            NclsConstant::Proof => 8.0,
            NclsConstant::Algorithm => 2.0,
        }
    }
}

/// `⌈2 ln(c·H·D)/λ²⌉`; a depth-0 tree is treated as depth 1.
pub fn default_n_cls(horizon: usize, depth: usize, lambda: f64, constant: NclsConstant) -> usize {
    let arg = constant.factor() * horizon.max(1) as f64 * depth.max(1) as f64;
    ((2.0 * arg.ln() / (lambda * lambda)).ceil() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtEceConfig {
    pub horizon: usize,
    pub n_cls: Option<usize>,
    pub constant: NclsConstant,
}

impl DtEceConfig {
    pub fn new(horizon: usize) -> Self {
        Self {
            horizon,
            n_cls: None,
            constant: NclsConstant::Proof,
        }
    }

    pub fn resolve_n_cls(&self, tree: &DecisionTreeClassifier) -> usize {
        self.n_cls
            .unwrap_or_else(|| default_n_cls(self.horizon, tree.depth(), tree.lambda, self.constant))
    }
}

/// One node visited during classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeVisit {
    pub arm: usize,
    pub threshold: f64,
    pub mean: f64,
    pub went_true: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtEceOutcome {
    pub trajectory: Trajectory,
    /// `None` if the horizon ran out inside the tree.
    pub classified: Option<usize>,
    pub path: Vec<NodeVisit>,
    pub n_cls: usize,
    pub truncated: bool,
}

/// `max_k' x·θ_ik' − x·θ_ik` at support context `ctx`.
pub fn pseudo_regret_step(coll: &BanditCollection, task: usize, ctx: usize, arm: usize) -> f64 {
    let best = coll.optimal_arm(task, ctx);
    coll.context_mean(task, ctx, best) - coll.context_mean(task, ctx, arm)
}

/// Runs the tree on `true_task`, then exploits until the horizon.
pub fn run_dtece(
    coll: &BanditCollection,
    true_task: usize,
    tree: &DecisionTreeClassifier,
    est: &EstimatedCollection,
    cfg: &DtEceConfig,
    rng: &mut SimRng,
) -> Result<DtEceOutcome> {
    coll.check_task(true_task)?;
    est.check_compatible(coll)?;
    if tree.num_tasks != coll.num_tasks() {
        return Err(Error::Format(format!(
            "tree covers {} tasks, collection has {}",
            tree.num_tasks,
            coll.num_tasks()
        )));
    }
    let n_cls = cfg.resolve_n_cls(tree);
    if n_cls == 0 {
        return Err(Error::InvalidParameter("n_cls must be at least 1".into()));
    }
    let horizon = cfg.horizon;
    let mut trajectory = Trajectory::with_capacity(horizon);
    let mut path = Vec::new();
    let mut node = &tree.root;

    let classified = loop {
        match node {
            Node::Leaf { leaf } => break *leaf,
            Node::Split {
                arm,
                threshold,
                on_true,
                on_false,
                ..
            } => {
                coll.check_arm(*arm)?;
                let mut total = 0.0;
                for _ in 0..n_cls {
                    if trajectory.len() == horizon {
                        return Ok(DtEceOutcome {
                            trajectory,
                            classified: None,
                            path,
                            n_cls,
                            truncated: true,
                        });
                    }
                    let context = coll.sample_context_index(rng);
                    let reward = coll.sample_reward(true_task, context, *arm, rng);
                    total += reward;
                    trajectory.push(Step {
                        context,
                        arm: *arm,
                        reward,
                        phase: Phase::Classify,
                    });
                }
                let mean = total / n_cls as f64;
                let went_true = mean <= *threshold;
                path.push(NodeVisit {
                    arm: *arm,
                    threshold: *threshold,
                    mean,
                    went_true,
                });
                node = if went_true { on_true } else { on_false };
            }
        }
    };

    while trajectory.len() < horizon {
        let context = coll.sample_context_index(rng);
        let arm = est.exploit_arm(classified, coll.context().context(context));
        let reward = coll.sample_reward(true_task, context, arm, rng);
        trajectory.push(Step {
            context,
            arm,
            reward,
            phase: Phase::Exploit,
        });
    }
    Ok(DtEceOutcome {
        trajectory,
        classified: Some(classified),
        path,
        n_cls,
        truncated: false,
    })
}
