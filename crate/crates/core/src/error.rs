use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid triangular distribution ({param}): {reason}")]
    InvalidDistribution { param: &'static str, reason: String },

    #[error("empty population")]
    EmptyPopulation,

    #[error("need at least {required} agents, got {actual}")]
    TooFewAgents { required: usize, actual: usize },

    #[error("cannot sample {peers} distinct peers from a population of {population}")]
    TooManyPeers { peers: usize, population: usize },

    #[error("cannot lay out {agents} agents on a torus with at least 3 rows and 3 columns")]
    NonRectangularPopulation { agents: usize },

    #[error("type distribution must sum to 1, got {sum}")]
    InvalidTypeDistribution { sum: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("unknown norm environment '{0}'")]
    UnknownEnvironment(String),

    #[error("state length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
}
