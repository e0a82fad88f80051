use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::estimate::EstimatedCollection;
use crate::{Error, Result};

/// Means this close to a band edge count as outside the band. Without it a
/// collection whose means differ by exactly `λ` could never be split.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// `{0, λ/4, 2λ/4, …}` up to 1, with 1 always included.
pub fn threshold_grid(lambda: f64) -> Vec<f64> {
    let step = lambda / 4.0;
    let mut grid: Vec<f64> = (0..)
        .map(|j| j as f64 * step)
        .take_while(|b| *b <= 1.0 + 1e-12)
        .map(|b: f64| b.min(1.0))
        .collect();
    if grid.last().is_none_or(|b| *b < 1.0 - 1e-12) {
        grid.push(1.0);
    }
    grid
}

fn confidently_low(mu: f64, b: f64, lambda: f64) -> bool {
    mu <= b - lambda / 2.0 + BOUNDARY_TOL
}

fn confidently_high(mu: f64, b: f64, lambda: f64) -> bool {
    mu > b + lambda / 2.0 - BOUNDARY_TOL
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub arm: usize,
    pub threshold: f64,
    /// `min(|S⁺|, |S⁻|)` over the band-excluded sets.
    pub score: usize,
}

/// Best `(arm, threshold)` for `subset`, or `None` when no test confidently
/// separates any two members. Ties go to the lowest arm, then lowest threshold.
///
/// Thresholds come from [`threshold_grid`]. Means just over `λ` apart can fall
/// between grid points, so when the grid scores zero everywhere the midpoints
/// of every pair of distinct means are tried as well.
pub fn greedy_split(est: &EstimatedCollection, subset: &[usize], lambda: f64) -> Option<Split> {
    let grid = threshold_grid(lambda);
    best_split(est, subset, lambda, |_| grid.clone()).or_else(|| {
        best_split(est, subset, lambda, |arm| {
            let mut values: Vec<f64> = subset.iter().map(|&i| est.mu(i, arm)).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            let mut mids: Vec<f64> = values
                .iter()
                .enumerate()
                .flat_map(|(a, &lo)| values[a + 1..].iter().map(move |&hi| 0.5 * (lo + hi)))
                .collect();
            mids.sort_by(f64::total_cmp);
            mids
        })
    })
}

fn best_split(est: &EstimatedCollection, subset: &[usize], lambda: f64, thresholds: impl Fn(usize) -> Vec<f64>) -> Option<Split> {
    let mut best: Option<Split> = None;
    for arm in 0..est.num_arms() {
        for b in thresholds(arm) {
            let low = subset.iter().filter(|&&i| confidently_low(est.mu(i, arm), b, lambda)).count();
            let high = subset.iter().filter(|&&i| confidently_high(est.mu(i, arm), b, lambda)).count();
            let score = low.min(high);
            if score > best.map_or(0, |s| s.score) {
                best = Some(Split { arm, threshold: b, score });
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    Leaf {
        leaf: usize,
    },
    Split {
        arm: usize,
        threshold: f64,
        lambda: f64,
        #[serde(rename = "true")]
        on_true: Box<Node>,
        #[serde(rename = "false")]
        on_false: Box<Node>,
    },
}

impl Node {
    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { on_true, on_false, .. } => 1 + on_true.depth().max(on_false.depth()),
        }
    }

    fn count_internal(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { on_true, on_false, .. } => 1 + on_true.count_internal() + on_false.count_internal(),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Node::Leaf { leaf } => out.push(*leaf),
            Node::Split { on_true, on_false, .. } => {
                on_true.collect_leaves(out);
                on_false.collect_leaves(out);
            }
        }
    }

    fn render_into(&self, indent: usize, label: &str, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            Node::Leaf { leaf } => {
                let _ = writeln!(out, "{pad}{label}task {leaf}");
            }
            Node::Split {
                arm,
                threshold,
                lambda,
                on_true,
                on_false,
            } => {
                let _ = writeln!(
                    out,
                    "{pad}{label}pull arm {arm}: mean <= {threshold:.4}? (band +/- {:.4})",
                    lambda / 2.0
                );
                on_true.render_into(indent + 1, "yes: ", out);
                on_false.render_into(indent + 1, "no:  ", out);
            }
        }
    }
}

/// A soft-split decision tree over tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeClassifier {
    pub num_tasks: usize,
    pub lambda: f64,
    pub root: Node,
}

impl DecisionTreeClassifier {
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn num_internal(&self) -> usize {
        self.root.count_internal()
    }

    /// Leaf labels from left (true) to right (false); a task may repeat.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut out);
        out
    }

    /// Walks from the root, asking `test(arm, threshold)` at every node and
    /// taking the true branch when it answers `true`. Returns the leaf label
    /// and the number of tests asked.
    pub fn descend(&self, mut test: impl FnMut(usize, f64) -> bool) -> (usize, usize) {
        let mut node = &self.root;
        let mut tests = 0;
        loop {
            match node {
                Node::Leaf { leaf } => return (*leaf, tests),
                Node::Split {
                    arm,
                    threshold,
                    on_true,
                    on_false,
                    ..
                } => {
                    tests += 1;
                    node = if test(*arm, *threshold) { on_true } else { on_false };
                }
            }
        }
    }

    /// Leaf reached by task `task` when tests observe `means[task][arm]` exactly.
    pub fn oracle_leaf(&self, means: &[Vec<f64>], task: usize) -> usize {
        self.descend(|arm, b| means[task][arm] <= b).0
    }

    /// Indented human-readable plan.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.root.render_into(0, "", &mut out);
        out
    }

    fn validate(&self) -> Result<()> {
        fn walk(node: &Node, m: usize) -> Result<()> {
            match node {
                Node::Leaf { leaf } if *leaf >= m => Err(Error::Format(format!("leaf {leaf} outside {m} tasks"))),
                Node::Leaf { .. } => Ok(()),
                Node::Split {
                    threshold,
                    lambda,
                    on_true,
                    on_false,
                    ..
                } => {
                    if !threshold.is_finite() || !(*lambda > 0.0) {
                        return Err(Error::Format("split with invalid threshold or band".into()));
                    }
                    walk(on_true, m)?;
                    walk(on_false, m)
                }
            }
        }
        walk(&self.root, self.num_tasks)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let tree: Self = serde_json::from_str(text)?;
        tree.validate()?;
        Ok(tree)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Builds the tree by recursive greedy splits. Children keep every task that
/// is not confidently on the other side, so tasks inside the band follow both
/// branches.
pub fn build_tree(est: &EstimatedCollection, lambda: f64) -> Result<DecisionTreeClassifier> {
    if est.num_tasks() == 0 {
        return Err(Error::InvalidParameter("cannot build a tree over zero tasks".into()));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter(format!("lambda {lambda} outside (0, 1]")));
    }
    let all: Vec<usize> = (0..est.num_tasks()).collect();
    let root = build_node(est, &all, lambda)?;
    Ok(DecisionTreeClassifier {
        num_tasks: est.num_tasks(),
        lambda,
        root,
    })
}

fn build_node(est: &EstimatedCollection, subset: &[usize], lambda: f64) -> Result<Node> {
    if let [only] = subset {
        return Ok(Node::Leaf { leaf: *only });
    }
    let split = greedy_split(est, subset, lambda).ok_or_else(|| Error::NoSplit(subset.to_vec()))?;
    let (arm, b) = (split.arm, split.threshold);
    let on_true: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&i| !confidently_high(est.mu(i, arm), b, lambda))
        .collect();
    let on_false: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&i| !confidently_low(est.mu(i, arm), b, lambda))
        .collect();
    if on_true.len() == subset.len() || on_false.len() == subset.len() {
        return Err(Error::NoProgress(subset.to_vec()));
    }
    Ok(Node::Split {
        arm,
        threshold: b,
        lambda,
        on_true: Box::new(build_node(est, &on_true, lambda)?),
        on_false: Box::new(build_node(est, &on_false, lambda)?),
    })
}

/// `depth / ((log₂ M + 1) · C*)`, the constant hidden in the greedy depth bound.
pub fn depth_ratio(depth: usize, num_tasks: usize, c_star: usize) -> f64 {
    depth as f64 / (((num_tasks as f64).log2() + 1.0) * c_star as f64)
}
