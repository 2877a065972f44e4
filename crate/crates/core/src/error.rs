use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MathError {
    #[error("requested {requested} qubits, statevector cap is {cap}")]
    QubitCap { requested: usize, cap: usize },
    #[error("qubit {qubit} out of range for a {qubits}-qubit register")]
    QubitIndex { qubit: usize, qubits: usize },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("mixture weights must be nonnegative and sum to 1 (got {0})")]
    WeightSum(f64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for {qubits} qubits")]
    VertexOutOfRange { vertex: usize, qubits: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge")]
    DuplicateEdge,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice sizes must be at least 1, got {0:?}")]
    BadSize([usize; 3]),
    #[error("lattice is already decorated")]
    AlreadyDecorated,
    #[error("operation requires a decorated lattice")]
    NotDecorated,
    #[error("edge coloring failed: {0}")]
    Coloring(String),
    #[error("coordinate {0:?} does not host a lattice qubit")]
    UnknownSite([i64; 3]),
    #[error("primal defect region contains face qubit {0:?}")]
    FaceInPrimalDefect([i64; 3]),
    #[error("lattice document does not match the structure it declares")]
    DocumentMismatch,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("unknown qubit handle")]
    UnknownHandle,
    #[error("batch of {got} handles does not match graph with {expected} qubits")]
    SizeMismatch { expected: usize, got: usize },
    #[error("backend has no loaded register")]
    NotLoaded,
    #[error("qubit {0} was already measured")]
    AlreadyMeasured(usize),
    #[error(transparent)]
    Math(#[from] MathError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("pattern is invalid: {0}")]
    InvalidPattern(String),
    #[error("qubit {qubit} depends on {missing}, which has no result yet")]
    MissingDependency { qubit: usize, missing: usize },
    #[error("unexpected message: {0}")]
    UnexpectedMessage(String),
    #[error("at least {needed} trials required, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error(transparent)]
    Backend(#[from] BackendError),
}

impl From<MathError> for ProtocolError {
    fn from(e: MathError) -> Self {
        ProtocolError::Backend(BackendError::Math(e))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("probability {name} = {value} outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("loss probability {0} exceeds 1/3")]
    LossTooLarge(f64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Math(#[from] MathError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("odd number of defects ({0}) on a periodic lattice")]
    OddDefects(usize),
    #[error("site {0} is not a face qubit")]
    NotAFace(usize),
    #[error("site index {0} out of range")]
    SiteOutOfRange(usize),
    #[error("error mask has {got} entries, lattice has {expected} sites")]
    MaskLength { expected: usize, got: usize },
    #[error("correction leaves a nonempty syndrome ({0} defects)")]
    ResidualSyndrome(usize),
    #[error("logical test requires a periodic lattice")]
    NotPeriodic,
    #[error("matching failed: {0}")]
    Matching(String),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid sweep config: {0}")]
    InvalidConfig(String),
    #[error("no crossing bracketed: {0}")]
    NoCrossing(String),
    #[error("decoder invariant violated at p={p}, L={size}, trial {trial}: {source}")]
    Decoder {
        p: f64,
        size: usize,
        trial: u64,
        source: DecodeError,
    },
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
