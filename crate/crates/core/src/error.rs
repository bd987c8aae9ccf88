use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is singular: the operator is not closed and its spectrum is the whole plane")]
    SingularMatrix,
    #[error("matrix has non-real entries")]
    NonRealInput,
    #[error("Jordan matrix has a zero eigenvalue")]
    SingularJordan,
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("a zero lies on the integration contour and dilation did not help")]
    BoundaryZero,
    #[error("no convergence: {0}")]
    NonConvergent(String),
    #[error("polynomial degree {degree} exceeds the limit {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("resolution n = {n} is below the minimum of 8")]
    ResolutionTooLow { n: usize },
    #[error("shift lies on the spectrum of the discretization")]
    NearSpectrum,
    #[error("no sign change of EV on the imaginary axis segment")]
    NoSignChange,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularMatrix => 4,
            Error::NonConvergent(_)
            | Error::IllConditioned(_)
            | Error::BoundaryZero
            | Error::NearSpectrum
            | Error::NoSignChange
            | Error::SingularJordan => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}
