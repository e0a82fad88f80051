//! Classification complexity of a bandit collection.
//!
//! Distances follow one convention throughout: [`hellinger_sq`] is
//! `1 − BC(p, q)`, the complement of the Bhattacharyya coefficient, and a pair
//! counts as λ-separated by a test when `hellinger_sq ≥ λ²`.

mod coefficients;
mod dec;
mod hellinger;

pub use coefficients::{
    classification_coefficient, coefficient_report, elimination_set, optimal_tree_depth,
    randomized_coefficient, ChainFlags, CoefficientReport, CoefficientValue, SeparationTable,
    MAX_COEFFICIENT_TASKS, MAX_DEPTH_TASKS,
};
pub use dec::{dec_coefficient, dec_threshold_scan, gamma_grid, DecInstance, DecRow, DecScan, DecValue, MAX_DEC_TASKS};
pub use hellinger::{hellinger_separation_level, hellinger_sq, test_hellinger_sq};

use crate::envsim::BanditCollection;
use crate::{Error, Result};

/// Probe policies available for classification. For the single-arm tests used
/// throughout the crate, each test pulls one arm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestClass {
    arms: Vec<usize>,
}

impl TestClass {
    pub fn new(arms: Vec<usize>, coll: &BanditCollection) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::InvalidParameter("test class is empty".into()));
        }
        for &a in &arms {
            coll.check_arm(a)?;
        }
        Ok(Self { arms })
    }

    /// Every arm of the collection.
    pub fn all_arms(coll: &BanditCollection) -> Self {
        Self {
            arms: (0..coll.num_arms()).collect(),
        }
    }

    /// Arms that are not the best-mean arm of any task (the information-revealing
    /// arms of a `hard` collection). Falls back to all arms if none remain.
    pub fn separating_arms(coll: &BanditCollection) -> Self {
        let optimal: Vec<usize> = (0..coll.num_tasks()).map(|i| coll.best_mean_arm(i)).collect();
        let arms: Vec<usize> = (0..coll.num_arms()).filter(|a| !optimal.contains(a)).collect();
        if arms.is_empty() {
            Self::all_arms(coll)
        } else {
            Self { arms }
        }
    }

    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }
}

/// Surviving task identities during classification: sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypothesisSet {
    members: Vec<usize>,
}

impl HypothesisSet {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::InvalidParameter("hypothesis set is empty".into()));
        }
        Ok(Self { members })
    }

    /// `{0, …, m − 1}`.
    pub fn full(m: usize) -> Self {
        assert!(m > 0, "hypothesis set is empty");
        Self {
            members: (0..m).collect(),
        }
    }

    pub(crate) fn from_mask(mask: u128) -> Self {
        Self {
            members: (0..128).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub(crate) fn mask(&self) -> u128 {
        self.members.iter().fold(0u128, |acc, &i| acc | 1 << i)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, task: usize) -> bool {
        self.members.binary_search(&task).is_ok()
    }

    pub fn is_subset_of(&self, other: &HypothesisSet) -> bool {
        self.members.iter().all(|m| other.contains(*m))
    }
}
