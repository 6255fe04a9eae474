//! Exact arithmetic substrate.

pub mod decomposition;
pub mod lex;
pub mod poly;
pub mod rational;
pub mod span;
pub mod transform;

pub use decomposition::CoefficientDecomposition;
pub use poly::{MultiPoly, Monomial};
pub use rational::Rational;
pub use transform::{RationalFunction, TransformKind};
