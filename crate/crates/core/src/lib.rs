//! Meta-learned, interpretable exploration plans for finite collections of
//! (contextual) multi-armed bandits.
//!
//! The crate is organized around the lifecycle of a plan:
//!
//! - [`envsim`]: bandit collections, context distributions, reward sampling
//!   and the `hard` / `rand` instance generators.
//! - [`complexity`]: Hellinger distances, elimination sets, the deterministic
//!   and randomized classification coefficients, optimal tree depth and the
//!   decision-estimation coefficient.
//! - [`ece`]: explicit classify-then-exploit against a known collection, with
//!   likelihood-based hypothesis elimination.
//! - [`metatrain`]: simulator-based estimation and soft-split decision tree
//!   construction.
//! - [`dtece`]: test-time traversal of a decision tree followed by exploitation.
//! - [`baselines`]: mUCB and mTS latent-bandit baselines.
//! - [`harness`]: seeded regret experiments, aggregation and CSV/JSON output.

pub mod baselines;
pub mod complexity;
pub mod dtece;
pub mod ece;
pub mod envsim;
mod error;
pub mod game;
pub mod harness;
pub mod metatrain;
pub mod rng;
pub mod trajectory;

pub use complexity::{CoefficientReport, HypothesisSet, TestClass};
pub use envsim::{BanditCollection, BanditInstance, ContextDistribution, Noise, RewardDist};
pub use error::{Error, Result};
pub use metatrain::{DecisionTreeClassifier, EstimatedCollection};
pub use rng::SimRng;
pub use trajectory::{Phase, RegretTrace, Step, Trajectory};
