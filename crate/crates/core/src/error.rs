use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid collection: {0}")]
    InvalidCollection(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("arm index {arm} out of range (K = {num_arms})")]
    ArmOutOfRange { arm: usize, num_arms: usize },

    #[error("task index {task} out of range (M = {num_tasks})")]
    TaskOutOfRange { task: usize, num_tasks: usize },

    #[error("K = {num_arms} is too small for M = {num_tasks} with the requested code (need {required})")]
    TooFewArms {
        num_arms: usize,
        num_tasks: usize,
        required: usize,
    },

    #[error("no collection satisfied separation {lambda} after {attempts} attempts")]
    SeparationUnsatisfiable { lambda: f64, attempts: usize },

    #[error("reward distributions belong to different families")]
    MixedFamilies,

    #[error("subset enumeration supports at most {max} tasks, got {got}")]
    TooManyTasks { max: usize, got: usize },

    #[error("zero-sum solver did not reach gap {tol} within {iterations} iterations (gap {gap})")]
    NonConvergence { iterations: usize, gap: f64, tol: f64 },

    #[error("no test separates the remaining hypotheses {0:?}")]
    NoSeparatingTest(Vec<usize>),

    #[error("classification exceeded {0} rounds")]
    MaxRoundsExceeded(usize),

    #[error("split made no progress on tasks {0:?}")]
    NoProgress(Vec<usize>),

    #[error("no split separates tasks {0:?}")]
    NoSplit(Vec<usize>),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
