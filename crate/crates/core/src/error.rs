use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("instance is not proper: edge {0} spans more than one level")]
    NotProper(String),
    #[error("instance is not level-connected ({0} gaps); use check_cl_necessary for a soundness-only filter")]
    NotLevelConnected(usize),
    #[error("instance too large for oracle: {0}")]
    TooLarge(String),
    #[error("search budget exceeded: {what} (cap {cap})")]
    Budget { what: &'static str, cap: u64 },
    #[error("common graph is disconnected; the SEFE oracle only covers connected common graphs")]
    DisconnectedCommonGraph,
    #[error("witness rejected: {0}")]
    BadWitness(String),
    #[error("missing provenance: {0}")]
    MissingProvenance(String),
    #[error("cluster {cluster} is not consecutive on level {level}")]
    NotConsecutive { cluster: String, level: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {}", .0.join("; "))]
    Schema(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
