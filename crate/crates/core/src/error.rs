use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the physical domain (r <= 0, theta at a pole, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// `(m^2 + 2mu beta/hbar^2)^2 < (2mu gamma/hbar^2)^2`: the angular
    /// separation constant would be complex.
    #[error(
        "complex u for m = {m}, beta = {beta}, gamma = {gamma}: \
         (m^2 + 2mu*beta/hbar^2)^2 < (2mu*gamma/hbar^2)^2"
    )]
    ComplexU { m: i64, beta: f64, gamma: f64 },

    #[error("pole in terminating series: Pochhammer denominator vanishes at term {term}")]
    Pole { term: usize },

    #[error("no sign change of the termination function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("no convergence after {0} iterations")]
    MaxIterations(usize),

    #[error("Taylor truncation exhausted: {needed} coefficients needed, {available} available")]
    TruncationExhausted { needed: usize, available: usize },

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} intervals")]
    Quadrature { error: f64, intervals: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
