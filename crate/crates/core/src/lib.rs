//! Finite pregroupoids, their enveloping groupoids, bitorsors and
//! fibrations over the interval groupoid.

pub mod cli;
pub mod document;
pub mod envelope;
pub mod error;
pub mod fibration;
pub mod generators;
pub mod groupoid;
pub mod pregroupoid;
pub mod report;
pub mod set;
pub mod suite;
pub mod torsor;

pub use envelope::{build_envelope, Envelope, EnvelopeArrow, EnvelopeOptions};
pub use error::{
    BookkeepingError, EnvelopeError, FibrationError, GroupoidError, StructureError, TorsorError, TwoCellError,
};
pub use groupoid::{FiniteGroupoid, GroupoidFunctor};
pub use pregroupoid::{Pregroupoid, PregroupoidMorphism, Quadrangle};
pub use report::{ValidationReport, Violation};
pub use set::FiniteSet;
