//! Decision engine for Erdős–Szekeres sets of one-dimensional semialgebraic
//! predicates.
//!
//! A finite set of predicates `Φ(x1, …, xk)` is *Erdős–Szekeres* when every
//! sufficiently long real sequence has an `n`-term subsequence on which some
//! member holds for every increasing choice of `k` indices. The crate decides
//! this property symbolically ([`decider::decide_es`]) and ships the
//! constructive pieces it relies on: Ramsey-type extraction of growing
//! subsequences ([`ramsey`]), coefficient types ([`types`]), a cylindrical
//! algebraic decomposition backend ([`qe`]) and the feasibility sentences
//! built on it ([`feasibility`]).

pub mod algebra;
pub mod corpus;
pub mod decider;
pub mod error;
pub mod feasibility;
pub mod predicate;
pub mod qe;
pub mod ramsey;
pub mod types;

pub use algebra::poly::MultiPoly;
pub use algebra::rational::Rational;
pub use error::{Error, Result};
