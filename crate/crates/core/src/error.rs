use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix rows have unequal lengths")]
    Ragged,

    #[error("sublattice is not contained in the ambient lattice")]
    NotContained,

    #[error("elements belong to coefficient groups of different shape ({left} vs {right} generators)")]
    GroupMismatch { left: usize, right: usize },

    #[error("generator `{name}` has order {order}: {reason}")]
    InvalidOrder {
        name: String,
        order: u64,
        reason: &'static str,
    },

    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u64),

    #[error("generator name `{0}` is declared twice")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parameter matrix for `{generator}` is not antisymmetric at ({i}, {j})")]
    NotAntisymmetric {
        generator: String,
        i: usize,
        j: usize,
    },

    #[error("exponent vector has a negative entry at position {}", .0 + 1)]
    NegativeExponent(usize),

    #[error("{n} variables exceeds the stratum enumeration cap of {cap}")]
    StrataCapExceeded { n: usize, cap: usize },

    #[error("stratum index {index} out of range for {n} variables")]
    InvalidStratum { index: usize, n: usize },

    #[error("malformed point: {0}")]
    MalformedPoint(String),

    #[error("coordinate {} is zero; quantum torus points must have only nonzero coordinates", .0 + 1)]
    ZeroCoordinate(usize),

    #[error("ideal generation requires characteristic 0 (found {0})")]
    PositiveCharacteristic(u64),

    #[error("character group factor of order {order} needs a root of unity that cannot be adjoined: {reason}")]
    UnsupportedTorsion { order: u64, reason: &'static str },

    #[error("bicharacter is not well defined on the grading group: {0}")]
    NotWellDefined(String),

    #[error("point does not lie on the toric variety: {0}")]
    NotOnVariety(String),

    #[error("stratum {0:?} fails the face check")]
    NotAFace(Vec<usize>),

    #[error("refinement hypothesis fails on stratum {0:?}")]
    RefinementFails(Vec<usize>),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal identity violated: {0}")]
    Internal(String),
}

impl Error {
    /// True when the error signals a broken identity rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }

    /// Stable machine-readable tag for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Ragged => "ragged_matrix",
            Error::NotContained => "not_contained",
            Error::GroupMismatch { .. } => "group_mismatch",
            Error::InvalidOrder { .. } => "invalid_order",
            Error::InvalidCharacteristic(_) => "invalid_characteristic",
            Error::DuplicateGenerator(_) => "duplicate_generator",
            Error::UnknownGenerator(_) => "unknown_generator",
            Error::NotAntisymmetric { .. } => "not_antisymmetric",
            Error::NegativeExponent(_) => "negative_exponent",
            Error::StrataCapExceeded { .. } => "strata_cap_exceeded",
            Error::InvalidStratum { .. } => "invalid_stratum",
            Error::MalformedPoint(_) => "malformed_point",
            Error::ZeroCoordinate(_) => "zero_coordinate",
            Error::PositiveCharacteristic(_) => "positive_characteristic",
            Error::UnsupportedTorsion { .. } => "unsupported_torsion",
            Error::NotWellDefined(_) => "not_well_defined",
            Error::NotOnVariety(_) => "not_on_variety",
            Error::NotAFace(_) => "not_a_face",
            Error::RefinementFails(_) => "refinement_fails",
            Error::Invalid(_) => "invalid_input",
            Error::Internal(_) => "internal",
        }
    }
}
