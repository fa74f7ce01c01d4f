use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Source text could not be parsed. Lines are 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    /// The circuit has more qubits than the topology can load.
    #[error("capacity infeasible: {qubits} qubits exceed {traps} traps x {load} load slots")]
    CapacityInfeasible { qubits: u32, traps: u32, load: u32 },

    #[error("qubit {0} is not mapped")]
    Unmapped(u32),

    /// No trap can accept a shuttled ion, even after eviction.
    #[error("shuttle deadlock at gate {gate}: no trap can accept ion {ion}")]
    Deadlock { gate: usize, ion: u32 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid suite: {0}")]
    Suite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
