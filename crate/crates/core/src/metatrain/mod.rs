//! Simulator-based meta-training: per-(task, arm) least-squares estimates
//! followed by greedy soft-split decision tree construction.

mod estimate;
mod tree;

pub use estimate::{estimate_task_arm, meta_train, n_est_formula, EstimatedCollection, EstimationMode, MetaTrainConfig, MetaTrained};
pub use tree::{build_tree, depth_ratio, greedy_split, threshold_grid, DecisionTreeClassifier, Node, Split, BOUNDARY_TOL};
