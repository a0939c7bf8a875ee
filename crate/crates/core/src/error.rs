use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants tagged "internal" signal a broken invariant rather than bad
/// input; they must never fire on a valid group.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("malformed permutation (generator {generator}): {reason}")]
    MalformedPermutation { generator: usize, reason: String },
    #[error("invalid Cayley table at row {row}, column {col}: {reason}")]
    InvalidCayleyTable { row: usize, col: usize, reason: String },
    #[error("group order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not an algebraic integer")]
    NotAlgebraicInteger,
    #[error("conductor {value} does not divide reduction conductor {reduction}")]
    ConductorMismatch { value: u32, reduction: u32 },
    #[error("ideal choice ({factor}, {root}) out of range")]
    InvalidIdealChoice { factor: usize, root: usize },
    #[error("no defect class found for block (internal)")]
    NoDefectClass,
    #[error("defect group order {found} does not match p^d = {expected} (internal)")]
    DefectMismatch { expected: usize, found: usize },
    #[error("character is not linear")]
    NotLinear,
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("MeatAxe failed to split a module after {attempts} attempts")]
    SplitFailure { attempts: usize },
    #[error("eigenvalue outside the splitting field")]
    EigenvalueOutsideField,
    #[error("decomposition numbers are not nonnegative integers (internal)")]
    NonIntegralSolution,
    #[error("row {0} lies outside the block")]
    RowOutsideBlock(usize),
    #[error("theta is not realizable: {0}")]
    NotRealizable(String),
    #[error("intertwiner space has unexpected dimension {0} (internal)")]
    IntertwinerRankError(usize),
    #[error("function is not constant on cosets of N")]
    NotCosetConstant,
    #[error("standard bijection failed: {0} (internal)")]
    BijectionFailure(String),
    #[error("character triple is invalid: {0}")]
    InvalidTriple(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
