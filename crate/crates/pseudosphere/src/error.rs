use thiserror::Error;

use crate::bianchi::BianchiError;
use crate::codazzi::CodazziError;
use crate::fieldcalc::FieldError;
use crate::geometry::GeometryError;
use crate::lift::LiftError;

/// Any failure of the library, tagged by the module that raised it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Bianchi(#[from] BianchiError),
    #[error(transparent)]
    Codazzi(#[from] CodazziError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

impl Error {
    /// True for configuration and domain-guard failures, as opposed to numerical ones.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Codazzi(CodazziError::Domain(_)) | Error::Lift(LiftError::SpecMismatch(_))
        )
    }
}
