use std::path::PathBuf;

use thiserror::Error;

use crate::placement::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid cache configuration: {}", format_violations(.0))]
    InvalidCacheConfig(Vec<Violation>),

    #[error("instance too large for exhaustive search: {size} assignments (limit {limit})")]
    InstanceTooLarge { size: u128, limit: u128 },

    #[error("inconsistent assignment: {0}")]
    InvalidAssignment(String),

    #[error("channel submatrix is numerically singular (condition estimate {condition:e})")]
    SingularChannel { condition: f64 },

    #[error("sum-DoF undefined: delivery time is zero with {users} users")]
    UndefinedMetric { users: usize },

    #[error(
        "user {user} failed to decode in round {round}, group {group:?}: residual {residual:e}"
    )]
    DecodeFailure {
        user: usize,
        round: usize,
        group: Vec<usize>,
        residual: f64,
    },

    #[error("coverage audit failed: {0}")]
    Coverage(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("trial {trial} (seed {seed:#x}): {source}")]
    Trial {
        trial: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
