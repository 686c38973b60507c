use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector has no primitive generator")]
    ZeroVector,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("lattices are not complementary: {0}")]
    NotComplementary(String),

    #[error("full-rank sublattice has a trivial quotient")]
    FullRankQuotient,

    #[error("polytope is not full-dimensional (dimension {dim} in ambient {ambient})")]
    NotFullDimensional { dim: usize, ambient: usize },

    #[error("not a lattice polytope: vertex {0} has non-integral coordinates")]
    NotLattice(String),

    #[error("face has dimension {0}, expected an edge")]
    NotAnEdge(usize),

    #[error("unbounded polyhedron")]
    Unbounded,

    #[error("cone is not in the fan: {0}")]
    ConeNotInFan(String),

    #[error("cones do not form a fan: {0}")]
    NotAFan(String),

    #[error("fan does not refine the cycle support")]
    NotARefinement,

    #[error("zero cone has no relative interior point off the origin")]
    ZeroCone,

    #[error("cycle is not balanced at cone {cone}")]
    Unbalanced { cone: String },

    #[error("weighted cone has dimension {found}, cycle dimension is {expected}")]
    WrongConeDimension { expected: usize, found: usize },

    #[error("cycle dimensions {k} and {m} are not complementary in ambient dimension {n}")]
    NotComplementaryDims { k: usize, m: usize, n: usize },

    #[error("no generic displacement found after {attempts} seeds starting at {seed}: {reason}")]
    GenericityExhausted { seed: u64, attempts: u32, reason: String },

    #[error("fan is not complete")]
    NotComplete,

    #[error("fan is not simplicial: cone {0}")]
    NotSimplicial(String),

    #[error("reference support vector has degenerate combinatorics: {0}")]
    DegenerateChamber(String),

    #[error("support function is not linear on cone {0}")]
    NotLinearOnCone(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroVector => "zero_vector",
            Error::EmptyInput(_) => "empty_input",
            Error::NotComplementary(_) => "not_complementary",
            Error::FullRankQuotient => "full_rank_quotient",
            Error::NotFullDimensional { .. } => "not_full_dimensional",
            Error::NotLattice(_) => "not_lattice",
            Error::NotAnEdge(_) => "not_an_edge",
            Error::Unbounded => "unbounded",
            Error::ConeNotInFan(_) => "cone_not_in_fan",
            Error::NotAFan(_) => "not_a_fan",
            Error::NotARefinement => "not_a_refinement",
            Error::ZeroCone => "zero_cone",
            Error::Unbalanced { .. } => "unbalanced",
            Error::WrongConeDimension { .. } => "wrong_cone_dimension",
            Error::NotComplementaryDims { .. } => "not_complementary_dims",
            Error::GenericityExhausted { .. } => "genericity_exhausted",
            Error::NotComplete => "not_complete",
            Error::NotSimplicial(_) => "not_simplicial",
            Error::DegenerateChamber(_) => "degenerate_chamber",
            Error::NotLinearOnCone(_) => "not_linear_on_cone",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::Parse(_) => "parse",
        }
    }
}
