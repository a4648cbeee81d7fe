//! Exact polynomial and polyvector-field algebra on `R^d`.

pub mod polynomial;
pub mod polyvector;
pub mod rational;
pub mod series;

pub use polynomial::{ExponentIndex, Polynomial};
pub use polyvector::{jacobiator, poisson_bracket, PolyVector};
pub use rational::{parse_rational, Rational};
pub use series::FormalSeries;
