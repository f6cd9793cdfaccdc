use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {k} is not invertible mod {n}")]
    BadGaloisExponent { k: u32, n: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("operation requires odd characteristic, got p = 2")]
    EvenCharacteristic,
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u64, u64),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("determinant must be 1, got {0}")]
    NotSymplectic(String),
    #[error("determinant must be a non-zero element of the prime subfield")]
    BadDeterminant,
    #[error("norm condition fails: the product of Galois conjugates is not 1")]
    NormCondition,
    #[error("size guard exceeded: {0} (pass the long-run flag to override)")]
    GuardExceeded(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
