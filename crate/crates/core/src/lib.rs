//! Membership of circuit-represented polynomials in ideals generated by
//! univariate polynomials, over exact fields.

pub mod applications;
pub mod certifier;
pub mod circuit;
pub mod division;
pub mod error;
pub mod field;
pub mod io;
pub mod gaussian;
pub mod hadamard;
pub mod linalg;
pub mod lowrank;
pub mod poly;
pub mod reductions;
pub mod selftest;

pub use circuit::{Circuit, DiagonalCircuit, Node};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{LinearForm, Matrix};
pub use poly::{SparsePoly, UnivariatePoly};
pub use division::UnivariateIdeal;
pub use lowrank::LowRankInput;
pub use applications::Graph;
