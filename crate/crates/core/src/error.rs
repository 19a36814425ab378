use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state norm {0:e} is too small to normalize")]
    Normalization(f64),
    #[error("expected {expected} amplitudes, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("qubit label `{0}` appears more than once")]
    LabelCollision(String),
    #[error("label sets differ: {0:?} vs {1:?}")]
    LabelMismatch(Vec<String>, Vec<String>),
    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("subset must be a non-empty proper subset of the register: {0:?}")]
    BadSubset(Vec<String>),
    #[error("measured pair {0:?} is not two distinct qubits of the register")]
    BadPair(Vec<String>),
    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),
    #[error("matrix is numerically singular")]
    SingularMatrix,
    #[error("bad input state: {0}")]
    BadInput(String),
    #[error("cannot parse `{0}` as a complex number")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
