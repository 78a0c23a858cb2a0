use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("no parts")]
    NoParts,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("overlapping qubit groups (qubit {0} appears twice)")]
    OverlappingGroups(usize),
    #[error("zero-probability branch")]
    ZeroProbability,
    #[error("empty keep list")]
    EmptyKeep,
    #[error("not a bijection on {0} elements")]
    NotBijective(usize),
    #[error("Bell measurement needs exactly two targets, got {0}")]
    BellTargets(usize),
    #[error("Charlie qubit separable")]
    CharlieQubitSeparable,
    #[error("Charlie basis is not orthonormal")]
    CharlieBasisNotOrthonormal,
    #[error("parameter {name} = {value} out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),
    #[error("singular parameterization; use pipeline")]
    SingularParameterization,
    #[error("operations do not share a dialogue fidelity row")]
    UnmatchedRow,
    #[error("message length {got} does not fit {expected} two-bit symbols")]
    MessageLength { expected: usize, got: usize },
    #[error("pair count must be at least 1")]
    EmptyProtocol,
    #[error("qubit {qubit} is held by {holder}, not {actor}")]
    NotHeld { qubit: usize, holder: &'static str, actor: &'static str },
    #[error("empty grid")]
    EmptyGrid,
}
