use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("register of {0} qubits is outside the supported range 1..={max}", max = crate::MAX_QUBITS)]
    UnsupportedSize(usize),

    #[error("outcome {outcome} has zero probability ({probability:e})")]
    ZeroProbability { outcome: u8, probability: f64 },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("operator is not unitary (max |U†U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("empty qubit set")]
    EmptyQubitSet,

    #[error("invalid Pauli label: {0}")]
    InvalidLabel(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("density matrix is not physical: {invariant} violated by {magnitude:e}")]
    Unphysical { invariant: &'static str, magnitude: f64 },

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("shot count must be at least 1")]
    NoShots,

    #[error("measurement records are not informationally complete: {0}")]
    IncompleteRecords(String),

    #[error("maximum likelihood did not converge after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NotConverged { iterations: usize, gradient_norm: f64 },
}
