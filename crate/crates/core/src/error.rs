use thiserror::Error;

use crate::report::{ValidationReport, Violation};

/// Malformed input: the data does not even describe a structure of the
/// requested shape. Kept apart from axiom failures, which are reported
/// through [`ValidationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{label}` in {context}")]
    UnknownLabel { context: String, label: String },
    #[error("map `{map}` is not total: no value for `{label}`")]
    NotTotal { map: String, label: String },
    #[error("map `{map}` has {found} entries, expected {expected}")]
    LengthMismatch { map: String, expected: usize, found: usize },
    #[error("map `{map}` refers to index {index} outside its codomain")]
    OutOfRange { map: String, index: usize },
    #[error("{0} must be inhabited")]
    Empty(&'static str),
    #[error("{0}")]
    Mismatch(String),
}

/// Which side condition of `yx^-1z` failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BookkeepingError {
    #[error("beta({x}) != beta({y})")]
    Beta { y: String, x: String },
    #[error("alpha({x}) != alpha({z})")]
    Alpha { x: String, z: String },
    #[error("ternary table has no entry for ({y}, {x}, {z})")]
    Undefined { y: String, x: String, z: String },
}

#[derive(Debug, Clone, Error)]
pub enum GroupoidError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("object subset {0} is empty")]
    EmptySubset(&'static str),
    #[error("groupoid is not A-B-transitive: object `{0}` has no arrow to the other side")]
    NotTransitive(String),
}

#[derive(Debug, Clone, Error)]
pub enum EnvelopeError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("input is not a pregroupoid:\n{0}")]
    InvalidPregroupoid(ValidationReport),
    #[error("input morphism is invalid:\n{0}")]
    InvalidMorphism(ValidationReport),
    #[error("table entry depends on the representative: {0}")]
    RepresentativeDependence(Violation),
    #[error("morphism target is not an underlying pregroupoid of the groupoid: {0}")]
    TargetMismatch(String),
    #[error("extension check failed: {0}")]
    Extension(Violation),
}

#[derive(Debug, Clone, Error)]
pub enum TorsorError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error("action is not free: {0}")]
    NotFree(Violation),
    #[error("invalid torsor:\n{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    Mismatch(Violation),
}

#[derive(Debug, Clone, Error)]
pub enum FibrationError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Torsor(#[from] TorsorError),
    #[error("invalid fibration:\n{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    Mismatch(Violation),
}

#[derive(Debug, Clone, Error)]
pub enum TwoCellError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("transformation is not natural: {0}")]
    NotNatural(Violation),
    #[error("encoding violates its equations: {0}")]
    EquationViolation(Violation),
    #[error("functor is not over I: {0}")]
    NotOverI(Violation),
}

#[derive(Debug, Clone, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Torsor(#[from] TorsorError),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("bad generator spec `{0}`")]
    BadSpec(String),
}
