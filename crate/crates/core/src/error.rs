use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("argument {x} outside supported domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tol:e}")]
    Convergence { estimate: f64, tol: f64 },

    /// Airy-based solutions need a positive force `qE0`.
    #[error("degenerate field: force qE0 = {force} (Airy-based solutions require qE0 > 0)")]
    DegenerateField { force: f64 },

    #[error("tag mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: String, found: String },

    #[error("invalid (solution, hamiltonian) pairing: {0}")]
    InvalidPairing(String),

    #[error("unsupported gauge for this operation: {0}")]
    UnsupportedGauge(String),

    #[error("shifted point {x} lies outside the source grid [{lo}, {hi}]")]
    OutOfGrid { x: f64, lo: f64, hi: f64 },

    #[error("wave field has zero norm")]
    ZeroNorm,

    #[error("tridiagonal solver breakdown: zero pivot at row {row}")]
    SingularPivot { row: usize },

    #[error("non-finite amplitude produced at t = {time}; last finite state at t = {last_good}")]
    Blowup { time: f64, last_good: f64 },
}

pub(crate) fn ensure_finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(what))
    }
}
