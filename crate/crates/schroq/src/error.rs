use thiserror::Error;

/// Errors produced by state, circuit and pipeline operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("gate qubits must be pairwise distinct: {0}")]
    DuplicateQubits(String),

    #[error("circuit is on {circuit} qubits but the state has {state}")]
    QubitCountMismatch { circuit: usize, state: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized: |psi|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("qubit subset must be nonempty")]
    EmptySubset,

    #[error("outcome {outcome} has probability {probability:.3e}; it cannot be conditioned on")]
    UnreachableOutcome { outcome: usize, probability: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("unknown initial state {name:?}; valid names: {valid}")]
    UnknownInitialState { name: String, valid: String },

    #[error("unknown preset {name:?}; valid names: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error("bin {bin} holds no conditioned state (probability below threshold)")]
    EmptyBin { bin: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
