//! Fourier coefficients, Mellin transform, special-cycle degrees and the
//! singular-moduli identity for the central derivative of the weight-one
//! incoherent Eisenstein series attached to k = Q(√−q).

pub mod cm;
pub mod cycles;
pub mod eisenstein;
pub mod numerics;
pub mod par;
pub mod phi;
pub mod quadfield;
pub mod whittaker;

pub use numerics::{BigComplex, BigReal, NumError};
pub use eisenstein::HalfPlanePoint;
pub use par::Exec;
pub use phi::LogCombination;
pub use quadfield::{FieldContext, ReducedForm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Num(#[from] NumError),
}
