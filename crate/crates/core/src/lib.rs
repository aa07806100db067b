//! Exact computations with finite-dimensional Lie algebras of
//! exponential-polynomial vector fields on `C^N`.
//!
//! The crate is organised bottom-up:
//!
//! * [`coeffring`]: exponential-polynomials over the Gaussian rationals.
//! * [`vfield`]: vector fields, the Lie bracket, projection and the torus chart.
//! * [`liestruct`]: bracket closures, structure constants, Killing form,
//!   root decompositions and type identification.
//! * [`roots`]: abstract root systems, Dynkin diagrams and obstruction witnesses.
//! * [`realize`]: concrete realizations of `A`-type algebras of maximal rank.
//! * [`certify`]: constraint systems, a small Groebner engine and the
//!   classification certificates built on top of everything else.

pub mod certify;
pub mod coeffring;
pub mod linalg;
pub mod liestruct;
pub mod realize;
pub mod roots;
pub mod vfield;
pub mod wire;

pub use coeffring::{ExpMonomial, ExpPoly, GaussianRational, Rational};
pub use vfield::VectorField;
