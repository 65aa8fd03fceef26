use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. Numeric payloads are carried as `f64`
/// regardless of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("energies out of order: {0}")]
    Order(String),

    #[error("input is not a solution of its equation: {what} (residual {residual:.3e} > {tolerance:.1e})")]
    InvalidSolution {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("gauge error: {0}")]
    Gauge(String),

    #[error("not a ground state: {0}")]
    NotGroundState(String),

    #[error("energy ordering violated: E_n = {energy} must exceed the factorization energy {factorization_energy}")]
    EnergyOrder {
        energy: f64,
        factorization_energy: f64,
    },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("eigenfunction is not normalizable: {0}")]
    NotNormalizable(String),

    #[error("quadrature did not converge: estimate {estimate:.12e}, error bound {error:.3e}")]
    Convergence { estimate: f64, error: f64 },

    #[error("{stage}: residual {residual:.3e} exceeds threshold {tolerance:.1e}")]
    ResidualExceeded {
        stage: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
