use thiserror::Error;

/// Errors raised by field construction, polynomial and matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {q} exceeds the configured bound {max}")]
    FieldTooLarge { q: u64, max: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element {value} is out of range for GF({q})")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("expected a polynomial of degree {expected}, got {found}")]
    WrongDegree { expected: usize, found: String },
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("expected {expected} matrix entries, got {found}")]
    MatrixShape { expected: usize, found: usize },
    #[error("matrix must be nonzero")]
    ZeroMatrix,
    #[error("the nonsingular case has no decomposition")]
    NonsingularCase,
    #[error("g_M' is irreducible, so the matrix is already affine-plane filling")]
    IrreducibleQuadratic,
    #[error("curve has a rational linear component")]
    LinearComponentPresent,
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
