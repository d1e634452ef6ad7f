use thiserror::Error;

/// Errors raised by the numerical kernels and code constructions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NonHermitian(f64),
    #[error("operator has empty support")]
    EmptySupport,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("support of the first operator is not contained in the support of the second")]
    SupportViolation,
    #[error("spectrum is singular on the requested space")]
    SingularSpectrum,
    #[error("matrix rows are not probability distributions")]
    NonStochastic,
    #[error("memory budget exceeded: need {needed} entries, cap {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("input out of range: {0}")]
    InputOutOfRange(String),
    #[error("invalid joint probability table")]
    InvalidTable,
    #[error("infeasible: rate {rate} exceeds max_p I(W^B,p) = {max}")]
    Infeasible { rate: f64, max: f64 },
    #[error("distribution P^XZ does not factor as P^X x P^Z")]
    NotIndependent,
    #[error("matrix Z is rank deficient")]
    RankDeficient,
    #[error("C2 is not a subcode of C1")]
    NotNested,
    #[error("map is not injective")]
    NotInjective,
    #[error("coset representatives do not enumerate C1/f(A)")]
    BadRepresentatives,
    #[error("domain size {0} is not a multiple of range size {1}")]
    IndivisibleDomain(usize, usize),
    #[error("channel outputs do not commute (max commutator norm {0:.3e})")]
    NonCommuting(f64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
