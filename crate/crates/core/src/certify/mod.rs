//! Certificates for the classification of maximal-rank semisimple algebras
//! of vector fields: polynomial constraints on root-vector constants, a
//! small Groebner engine, the highest-weight obstruction and the final
//! classifier.

pub mod classify;
pub mod constraints;
pub mod groebner;
pub mod obstruction;
pub mod poly;

use thiserror::Error;

use crate::liestruct::LieError;
use crate::roots::RootError;
use crate::vfield::FieldError;

pub use classify::{census, classify, Certificate, Evidence, Transcript, Verdict};
pub use constraints::{
    ansatz_constraints, pairwise_reduce, solve_small, Classification, PolyConstraintSystem, Relation,
};
pub use groebner::GroebnerError;
pub use obstruction::{highest_weight_obstruction, joint_kernel};
pub use poly::{Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("system has {count} variables after saturation; the cap is {cap}")]
    VariableCap { count: usize, cap: usize },
    #[error("relation refers to index {index}, but the ansatz has {n}")]
    UndefinedIndex { index: usize, n: usize },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("bracket of {element} with {derivation} leaves the space")]
    SpaceNotStable { derivation: String, element: String },
    #[error("{0}")]
    Precondition(String),
}

impl CertifyError {
    /// Failures that mean a limit was hit rather than a verdict reached.
    pub fn is_resource_exhaustion(&self) -> bool {
        matches!(
            self,
            CertifyError::VariableCap { .. }
                | CertifyError::Groebner(GroebnerError::BasisCap { .. })
                | CertifyError::Lie(LieError::DimensionExceeded { .. })
        )
    }
}
