//! SMT-LIB2 export of sentences (logic NRA), for cross-checking with
//! external solvers.

use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use super::{Quantifier, Sentence};
use crate::algebra::poly::MultiPoly;
use crate::algebra::rational::Rational;
use crate::predicate::{Formula, Relation};

fn constant(q: &Rational) -> String {
    let mag = if q.is_integer() {
        q.abs().numer().to_string()
    } else {
        format!("(/ {} {})", q.numer().abs(), q.denom())
    };
    if q.is_negative() {
        format!("(- {mag})")
    } else {
        mag
    }
}

fn monomial(vars: &[String], m: &[u32]) -> Vec<String> {
    let mut out = Vec::new();
    for (v, &e) in vars.iter().zip(m) {
        for _ in 0..e {
            out.push(v.clone());
        }
    }
    out
}

fn term(vars: &[String], m: &[u32], c: &Rational) -> String {
    let factors = monomial(vars, m);
    if factors.is_empty() {
        return constant(c);
    }
    let product = if factors.len() == 1 {
        factors[0].clone()
    } else {
        format!("(* {})", factors.join(" "))
    };
    if c.is_one() {
        product
    } else if *c == -Rational::one() {
        format!("(- {product})")
    } else {
        format!("(* {} {})", constant(c), factors.join(" "))
    }
}

/// `lhs rel rhs` with the constant moved to the right-hand side.
fn atom(p: &MultiPoly, rel: Relation) -> String {
    let vars = p.vars();
    let zero_exp = vec![0; vars.len()];
    let rhs = -p.coeff(&zero_exp);
    let terms: Vec<String> = p
        .terms()
        .rev()
        .filter(|(m, _)| m.iter().any(|&e| e > 0))
        .map(|(m, c)| term(vars, m, c))
        .collect();
    let lhs = match terms.len() {
        0 => "0".to_string(),
        1 => terms[0].clone(),
        _ => format!("(+ {})", terms.join(" ")),
    };
    let rhs = if rhs.is_zero() { "0".into() } else { constant(&rhs) };
    match rel {
        Relation::Eq => format!("(= {lhs} {rhs})"),
        Relation::Ne => format!("(not (= {lhs} {rhs}))"),
        Relation::Lt => format!("(< {lhs} {rhs})"),
        Relation::Le => format!("(<= {lhs} {rhs})"),
        Relation::Gt => format!("(> {lhs} {rhs})"),
        Relation::Ge => format!("(>= {lhs} {rhs})"),
    }
}

fn formula(f: &Formula) -> String {
    match f {
        Formula::Atom(a) => atom(&a.poly, a.rel),
        Formula::And(xs) => format!(
            "(and {})",
            xs.iter().map(formula).collect::<Vec<_>>().join(" ")
        ),
        Formula::Or(xs) => format!(
            "(or {})",
            xs.iter().map(formula).collect::<Vec<_>>().join(" ")
        ),
        Formula::Not(x) => format!("(not {})", formula(x)),
    }
}

pub fn export_smtlib(s: &Sentence) -> String {
    let mut body = formula(&s.matrix);
    for (v, q) in s.vars.iter().zip(&s.quantifiers).rev() {
        let kw = match q {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        };
        body = format!("({kw} (({v} Real)) {body})");
    }
    let mut out = String::new();
    writeln!(out, "(set-logic NRA)").unwrap();
    writeln!(out, "(assert {body})").unwrap();
    writeln!(out, "(check-sat)").unwrap();
    out
}
