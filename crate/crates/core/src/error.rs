use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("not a Lie element")]
    NotLie,
    #[error("non-integral input")]
    NonIntegral,
    #[error("non-homogeneous input")]
    NonHomogeneous,
    #[error("constant term must be {0}")]
    ConstantTerm(i32),
    #[error("word is not in the lower central series term of degree {0}")]
    NotInGamma(usize),
    #[error("leading class is not primitive")]
    NotPrimitive,
    #[error("degree {degree} at genus {genus} is beyond the lattice budget")]
    Budget { degree: usize, genus: usize },
    #[error("derivation is not symplectic")]
    NotSymplectic,
    #[error("derivation is not in Ker(Tr)")]
    NotTraceFree,
    #[error("genus {genus} too small for degree {degree}")]
    GenusTooSmall { degree: usize, genus: usize },
    #[error("automorphism is not in A_{0}")]
    NotInFiltration(usize),
    #[error("degree cap {cap} exceeded (need {need})")]
    DegreeCap { cap: usize, need: usize },
    #[error("wrong degree: expected {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("half-symmetric term is not of the form u-u")]
    NotSymmetric,
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-integral result (internal error)")]
    NonIntegralResult,
}

pub type Result<T> = std::result::Result<T, Error>;
