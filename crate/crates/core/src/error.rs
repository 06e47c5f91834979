//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input document is not valid JSON or does not match the schema.
    #[error("malformed document: {0}")]
    Malformed(String),

    /// Declared dimensions disagree with the data.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Entry cannot be represented as a finite rational (zero denominator,
    /// bad numeral, non-finite float).
    #[error("non-finite entry: {0}")]
    NonFiniteEntry(String),

    /// Register size outside the supported range.
    #[error("register size K = {0} outside 1..={max}", max = crate::model::MAX_REGISTER)]
    RegisterSize(usize),

    /// Basis-index width outside 1..=64.
    #[error("basis width {0} outside 1..=64")]
    InvalidWidth(usize),

    /// Basis value does not fit in the stated width.
    #[error("basis value {value} does not fit in width {width}")]
    ValueOutOfRange { value: u64, width: usize },

    /// 1-based bit or row position outside the valid range.
    #[error("position {position} outside 1..={limit}")]
    PositionOutOfRange { position: usize, limit: usize },

    /// Two indices (or an index and a matrix) have incompatible widths.
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    /// State amplitudes do not sum to unit norm within tolerance.
    #[error("state not normalized: |amplitudes|^2 sums to {0}")]
    NotNormalized(f64),

    /// Duplicate basis index in a sparse state.
    #[error("duplicate basis index {0} in state")]
    DuplicateTerm(u64),

    /// Sparse state has no nonzero terms.
    #[error("state has no nonzero amplitudes")]
    EmptyState,

    /// A time or amplitude argument is NaN or infinite.
    #[error("non-finite value: {0}")]
    NonFiniteValue(String),

    /// Environment too large for exhaustive enumeration.
    #[error("environment size N = {0} exceeds oracle limit {limit}", limit = crate::spectrum::ORACLE_MAX_ENV)]
    EnvTooLarge(usize),

    /// Register too large to materialize a density matrix.
    #[error("register size K = {0} exceeds density-matrix limit {limit}", limit = crate::model::MAX_DENSITY_REGISTER)]
    DensityTooLarge(usize),

    /// Density matrix fails a structural invariant.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// Input is not a class of the signature partition.
    #[error("invalid class: {0}")]
    InvalidClass(String),

    /// Pair-case operation applied to a tag it is not defined for.
    #[error("case not applicable: {0}")]
    InapplicableCase(String),
}
