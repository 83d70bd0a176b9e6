use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: forward reference to {name}")]
    ForwardReference { line: usize, name: String },
    #[error("line {line}: reference to undefined gate {name}")]
    UndefinedGate { line: usize, name: String },
    #[error("line {line}: duplicate gate name {name}")]
    DuplicateGate { line: usize, name: String },
    #[error("missing output line")]
    MissingOutput,
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("missing assignment for {0}")]
    MissingAssignment(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} budget exceeded: limit {limit}, reached {reached}")]
    Budget {
        what: &'static str,
        limit: u64,
        reached: u64,
    },
    #[error("embedding verification failed: {0}")]
    EmbedVerification(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
