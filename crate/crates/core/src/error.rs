use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("field length {got} does not match grid size {expected}")]
    Shape { expected: usize, got: usize },

    #[error("multiplier is not finite at xi = {xi}")]
    NonFiniteSymbol { xi: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("invalid initial data: {0}")]
    InitialData(String),

    #[error("solver failure at t = {t}: {reason}")]
    Solver { t: f64, reason: String },

    #[error("quadrature unresolved: {0}")]
    Quadrature(String),

    #[error("no sign change: bracket endpoints exit on the same side ({0})")]
    NoSignChange(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status: 1 for failed checks, 2 for bad input, 3 for the solver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoSignChange(_) | Error::Quadrature(_) | Error::NonFiniteSymbol { .. } => 1,
            Error::Solver { .. } => 3,
            Error::Grid(_)
            | Error::Shape { .. }
            | Error::Config(_)
            | Error::InitialData(_)
            | Error::Parse { .. }
            | Error::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
