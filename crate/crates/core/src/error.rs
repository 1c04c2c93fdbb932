use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown node id {0}")]
    UnknownNode(u32),

    #[error("no feasible path from {from} to {to}")]
    NoFeasiblePath { from: u32, to: u32 },

    #[error("structurally infeasible: per-arc delay budget {delta1} < 1")]
    StructurallyInfeasible { delta1: i64 },

    #[error("greedy dead-end: no finite arc from level {level} to level {}", level + 1)]
    GreedyDeadEnd { level: usize },

    #[error("no feasible selection of {needed} hosts")]
    NoFeasibleSelection { needed: usize },

    #[error("no feasible path among {k} shortest paths")]
    NoFeasibleAmongK { k: usize },

    #[error("instance too large: {nodes} nodes exceeds node limit {limit}")]
    InstanceTooLarge { nodes: usize, limit: usize },

    #[error("infeasible: no simple path admits a host selection")]
    Infeasible,

    #[error("network is disconnected")]
    Disconnected,

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("could not generate connected graph after {retries} retries")]
    GenerationFailed { retries: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error reports an infeasible instance rather than a
    /// malformed input or an internal failure.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::NoFeasiblePath { .. }
                | Error::StructurallyInfeasible { .. }
                | Error::GreedyDeadEnd { .. }
                | Error::NoFeasibleSelection { .. }
                | Error::NoFeasibleAmongK { .. }
                | Error::Infeasible
        )
    }
}
