use core::fmt;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    Domain { what: &'static str, value: f64 },
    /// Adaptive quadrature could not reach the requested tolerance.
    Quadrature { estimate: f64, abs_error: f64, evaluations: usize },
    /// Bracket growth never produced a sign change.
    NoBracket { what: &'static str, lo: f64, hi: f64 },
    /// Iteration budget exhausted before the residual contract was met.
    NoConvergence { what: &'static str, iterations: usize, residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "domain error: {what} (got {value})"),
            Error::Quadrature { estimate, abs_error, evaluations } => write!(
                f,
                "quadrature did not converge after {evaluations} evaluations \
                 (partial estimate {estimate}, error estimate {abs_error})"
            ),
            Error::NoBracket { what, lo, hi } => {
                write!(f, "no sign change for {what} on [{lo}, {hi}]")
            }
            Error::NoConvergence { what, iterations, residual } => {
                write!(f, "{what} did not converge in {iterations} iterations (residual {residual})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn domain<T>(what: &'static str, value: f64) -> Result<T> {
    Err(Error::Domain { what, value })
}
