//! Kontsevich star products on polynomial Poisson structures over `R^d`.
//!
//! Symbolic parts (polynomials, polyvectors, multidifferential operators,
//! star-product series) work over exact rationals. Graph weights are
//! estimated in double precision by Monte-Carlo integration and snapped back
//! to rationals before they enter exact algebra.

pub mod error;
pub mod graphs;
pub mod linsymp;
pub mod operators;
pub mod polyalg;
pub mod random;
pub mod starprod;
pub mod weights;

pub use error::{Error, Result};
pub use graphs::{Graph, GraphId, Vertex};
pub use operators::MultiDiffOp;
pub use polyalg::{FormalSeries, PolyVector, Polynomial, Rational};
pub use starprod::StarSeries;
