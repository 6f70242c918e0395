use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = 1 is not allowed here; use the classical Euler path")]
    QIsOne,
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("denominator of {value} is divisible by p = {prime}")]
    DenominatorDivisibleByP { value: String, prime: u64 },
    #[error("{a} is not coprime to p = {prime}")]
    NotCoprime { a: i64, prime: u64 },
    #[error("p-adic logarithm needs an argument congruent to 1 mod p")]
    NotOneUnit,
    #[error("p-adic exponential needs an argument of valuation >= 1")]
    OutOfDomain,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("value has negative valuation, which is not representable")]
    NegativeValuation,
    #[error("{series} did not converge within {terms} terms")]
    TruncationNotConverged { series: &'static str, terms: usize },
    #[error("regularized sum did not reach the tail threshold within {terms} terms")]
    NoConvergence { terms: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
