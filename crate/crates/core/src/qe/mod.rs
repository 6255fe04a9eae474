//! Decision procedure for prenex sentences over the reals.
//!
//! Sentences are decided by cylindrical algebraic decomposition: Collins'
//! projection eliminates the innermost variable first, and lifting builds
//! stacks over sample points whose coordinates are rationals where possible
//! and real algebraic numbers on sections. Quantifiers are folded lazily, so
//! stacks are only built while the answer is still open. Budgets turn
//! runaway instances into [`Error::ResourceLimit`] instead of hangs.

pub mod algebraic;
pub mod cad;
pub mod resultant;
pub mod smtlib;
pub mod upoly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::predicate::{Parser, VarMode};
use crate::predicate::Formula;

pub use algebraic::{alg_sign_at, RealNum};
pub use cad::{build_cad, CadCell, CadTree};
pub use resultant::resultant;
pub use smtlib::export_smtlib;
pub use upoly::{isolate_real_roots, RootInterval, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QeConfig {
    pub max_vars: usize,
    /// Largest total degree allowed for a projection factor.
    pub max_degree: u32,
    pub max_projection: usize,
    pub cell_budget: u64,
}

impl Default for QeConfig {
    fn default() -> Self {
        QeConfig {
            max_vars: 5,
            max_degree: 48,
            max_projection: 4000,
            cell_budget: 2_000_000,
        }
    }
}

/// `Q1 v1. Q2 v2. … matrix`, outermost variable first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub vars: Vec<String>,
    pub quantifiers: Vec<Quantifier>,
    /// Polynomials are expressed over exactly `vars`.
    pub matrix: Formula,
}

impl Sentence {
    pub fn new(prefix: Vec<(Quantifier, String)>, matrix: Formula) -> Result<Self> {
        let vars: Vec<String> = prefix.iter().map(|(_, v)| v.clone()).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("variable '{v}' bound twice")));
            }
        }
        for a in matrix.atoms() {
            for u in a.poly.used_vars() {
                let name = &a.poly.vars()[u];
                if !vars.contains(name) {
                    return Err(Error::Invalid(format!("free variable '{name}'")));
                }
            }
        }
        let matrix = matrix.map_polys(&|p| p.with_vars(&vars));
        Ok(Sentence {
            quantifiers: prefix.iter().map(|(q, _)| *q).collect(),
            vars,
            matrix,
        })
    }

    /// `forall r. exists l, h. <predicate over r, l, h>`
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text, VarMode::Named(Vec::new()))?;
        let (prefix, matrix) = p.parse_quantified()?;
        let prefix = prefix
            .into_iter()
            .map(|(forall, v)| {
                let q = if forall {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                (q, v)
            })
            .collect();
        Sentence::new(prefix, matrix)
    }

    pub fn negate(&self) -> Sentence {
        Sentence {
            vars: self.vars.clone(),
            quantifiers: self.quantifiers.iter().map(|q| q.dual()).collect(),
            matrix: self.matrix.negated(),
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, q) in self.vars.iter().zip(&self.quantifiers) {
            let kw = match q {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            };
            write!(f, "{kw} {v}. ")?;
        }
        write!(f, "{}", self.matrix)
    }
}

pub fn decide_sentence(s: &Sentence, cfg: &QeConfig) -> Result<bool> {
    cad::decide_with_stats(s, cfg).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let s = Sentence::parse("forall x. exists y, z. y > x^2 and z != 0").unwrap();
        assert_eq!(s.vars, ["x", "y", "z"]);
        assert_eq!(
            s.quantifiers,
            [Quantifier::Forall, Quantifier::Exists, Quantifier::Exists]
        );
        let again = Sentence::parse(&s.to_string()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn free_variables_rejected() {
        assert!(Sentence::parse("forall x. x + w > 0").is_err());
    }

    #[test]
    fn negation_flips_truth() {
        let cfg = QeConfig::default();
        for text in ["forall x. exists y. y > x^2", "exists y. forall x. y > x^2"] {
            let s = Sentence::parse(text).unwrap();
            assert_eq!(
                decide_sentence(&s.negate(), &cfg).unwrap(),
                !decide_sentence(&s, &cfg).unwrap()
            );
        }
    }
}
