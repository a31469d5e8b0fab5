use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("bitstring has {got} bits, cost function expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("qubit {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {0} is addressed more than once")]
    OverlappingQubits(usize),

    #[error("value {value} is not strictly inside the bounds ({c_min}, {c_max})")]
    OutOfBounds { value: f64, c_min: f64, c_max: f64 },

    #[error(
        "{requested} qubits exceed the state-vector cap of {max}; \
         use closed-form mode (or raise QANNEAL_MAX_QUBITS)"
    )]
    StateTooLarge { requested: usize, max: usize },

    #[error("{requested} bits exceed the exhaustive enumeration cap of {max}")]
    EnumerationTooLarge { requested: usize, max: usize },

    #[error("post-selection onto the all-zero control register has zero weight")]
    DegeneratePostselection,

    #[error("no all-zero control outcome within {0} repetitions")]
    RepetitionCutoff(u64),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
