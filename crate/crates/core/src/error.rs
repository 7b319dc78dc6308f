use thiserror::Error;

/// Errors produced by tower construction, graph building and the analyses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field of order {order} exceeds the size cap {cap}")]
    SizeCapExceeded { order: u64, cap: u64 },
    #[error("polynomial {0} is reducible over its base field")]
    ReduciblePolynomial(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("F_{size} is not a subfield here")]
    NotSubfield { size: u32 },
    #[error("element does not lie in F_{size}")]
    NotInField { size: u32 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("direction set has duplicates")]
    DuplicateDirections,
    #[error("direction count {m} out of range for q = {q}")]
    BadDirectionCount { m: u32, q: u32 },
    #[error("point set is not a hyperplane coset")]
    NotHyperplane,
    #[error("{q} is not a square")]
    NotSquare { q: u32 },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("search budget exceeded after {explored} nodes ({found} cliques found)")]
    BudgetExceeded { explored: u64, found: u64 },
    #[error("clique is not a Delsarte clique: {0}")]
    NotDelsarte(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
