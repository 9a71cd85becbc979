use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("Cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),
    #[error("Weyl group enumeration exceeded the cap of {0} elements")]
    WeylCapExceeded(usize),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operation requires an adjoint root datum ({0} is not adjoint)")]
    NotAdjoint(String),
    #[error("simple index {index} out of range for rank {rank}")]
    BadSimpleIndex { index: usize, rank: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mixed contexts: {0}")]
    MixedContext(String),
    #[error("exact division failed: {0}")]
    DivisionFailure(String),
    #[error("evaluation point lies on a denominator wall: {0}")]
    VanishingDenominator(String),
    #[error("denominator wall equals the allowed wall {0}")]
    AllowedWallInDenominator(usize),
    #[error("bimodule invariant violated: {0}")]
    InvariantViolation(String),
    #[error("not generically graph-filtered: {0}")]
    NotGraphFiltered(String),
    #[error("defective fiber (not diagonalizable): {0}")]
    DefectiveFiber(String),
    #[error("candidates are linearly dependent over the fraction field")]
    DependentCandidates,
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),
    #[error("no separating point found: {0}")]
    NoSeparatingPoint(String),
    #[error("not a sublattice: {0}")]
    NotSublattice(String),
    #[error("no verifiable Steinberg basis within the search box")]
    NoSteinbergBasis,
}
