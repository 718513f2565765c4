//! Dialgebra varieties, their operads and pseudo-algebra envelopes.
//!
//! Everything is generic over a [`Scalar`] field; the `Rational*` aliases fix
//! the exact field `BigRational` used by the command line tool and tests.

pub mod combinatorics;
pub mod conformal;
pub mod dialgebra;
pub mod dsl;
pub mod error;
pub mod linalg;
pub mod operads;
pub mod pseudo;
pub mod scalar;
pub mod terms;
pub mod translate;

pub use combinatorics::{Partition, Permutation};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use terms::{DiOp, DiPoly, DiShape, Monomial, MultilinearPoly, Poly, Shape, TensorMonomial, TensorPoly, Term, Tree};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
pub type RationalPoly = MultilinearPoly<Rational>;
pub type RationalDiPoly = DiPoly<Rational>;
pub type RationalTensorPoly = TensorPoly<Rational>;
