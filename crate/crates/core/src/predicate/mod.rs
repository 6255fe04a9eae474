//! Boolean combinations of polynomial sign conditions over `x1, …, xk`.

mod parser;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::poly::{var_names, MultiPoly};
use crate::algebra::rational::{self, Rational};
use crate::error::{Error, Result};

pub use parser::{parse, parse_predicate, parse_with_vars, Parser, VarMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Eq,
        Relation::Ne,
        Relation::Lt,
        Relation::Le,
        Relation::Gt,
        Relation::Ge,
    ];

    /// Truth of `p rel 0` given the sign of `p`.
    pub fn holds(self, sign: i8) -> bool {
        match self {
            Relation::Eq => sign == 0,
            Relation::Ne => sign != 0,
            Relation::Lt => sign < 0,
            Relation::Le => sign <= 0,
            Relation::Gt => sign > 0,
            Relation::Ge => sign >= 0,
        }
    }

    pub fn negate(self) -> Relation {
        match self {
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Gt => Relation::Le,
            Relation::Ge => Relation::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

/// `poly rel 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub poly: MultiPoly,
    pub rel: Relation,
}

impl Atom {
    pub fn new(poly: MultiPoly, rel: Relation) -> Self {
        Atom { poly, rel }
    }

    pub fn eval(&self, point: &[Rational]) -> bool {
        self.rel.holds(rational::sign(&self.poly.eval(point)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn atom(poly: MultiPoly, rel: Relation) -> Formula {
        Formula::Atom(Atom::new(poly, rel))
    }

    /// Conjunction; a single operand is returned unchanged.
    pub fn and(mut items: Vec<Formula>) -> Formula {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        }
    }

    pub fn or(mut items: Vec<Formula>) -> Formula {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        }
    }

    /// Evaluates with atoms decided by `atom_truth`.
    pub fn eval_with<F>(&self, atom_truth: &mut F) -> bool
    where
        F: FnMut(&Atom) -> bool,
    {
        match self {
            Formula::Atom(a) => atom_truth(a),
            Formula::And(xs) => xs.iter().all(|x| x.eval_with(atom_truth)),
            Formula::Or(xs) => xs.iter().any(|x| x.eval_with(atom_truth)),
            Formula::Not(x) => !x.eval_with(atom_truth),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> bool {
        self.eval_with(&mut |a: &Atom| a.eval(point))
    }

    /// Three-valued evaluation: `None` when some needed atom is unknown.
    pub fn eval_partial<F>(&self, atom_truth: &mut F) -> Option<bool>
    where
        F: FnMut(&Atom) -> Option<bool>,
    {
        match self {
            Formula::Atom(a) => atom_truth(a),
            Formula::And(xs) => {
                let mut unknown = false;
                for x in xs {
                    match x.eval_partial(atom_truth) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            Formula::Or(xs) => {
                let mut unknown = false;
                for x in xs {
                    match x.eval_partial(atom_truth) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
            Formula::Not(x) => x.eval_partial(atom_truth).map(|v| !v),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            Formula::Not(x) => x.collect_atoms(out),
        }
    }

    pub fn map_polys<F>(&self, f: &F) -> Formula
    where
        F: Fn(&MultiPoly) -> MultiPoly,
    {
        match self {
            Formula::Atom(a) => Formula::atom(f(&a.poly), a.rel),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.map_polys(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.map_polys(f)).collect()),
            Formula::Not(x) => !x.map_polys(f),
        }
    }

    /// Negation normal form of `¬self`: negations are pushed into the atoms
    /// by flipping relations.
    pub fn negated(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::atom(a.poly.clone(), a.rel.negate()),
            Formula::And(xs) => Formula::Or(xs.iter().map(|x| x.negated()).collect()),
            Formula::Or(xs) => Formula::And(xs.iter().map(|x| x.negated()).collect()),
            Formula::Not(x) => x.nnf(),
        }
    }

    pub fn nnf(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.nnf()).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.nnf()).collect()),
            Formula::Not(x) => x.negated(),
        }
    }

    pub fn write_with(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{} {} 0", a.poly, a.rel.symbol()),
            Formula::And(xs) | Formula::Or(xs) => {
                let sep = if matches!(self, Formula::And(_)) {
                    " and "
                } else {
                    " or "
                };
                if nested {
                    write!(f, "(")?;
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    x.write_with(f, true)?;
                }
                if nested {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Not(x) => {
                write!(f, "not ")?;
                match x.as_ref() {
                    Formula::Atom(_) | Formula::Not(_) => x.write_with(f, true),
                    _ => {
                        write!(f, "(")?;
                        x.write_with(f, false)?;
                        write!(f, ")")
                    }
                }
            }
        }
    }
}

impl std::ops::Not for Formula {
    type Output = Formula;
    fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, false)
    }
}

/// A single predicate `Φ(x1, …, xk)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateAst {
    pub root: Formula,
    pub arity: usize,
}

impl PredicateAst {
    /// Re-expresses every atom over `x1..x_arity`.
    pub fn new(root: Formula, arity: usize) -> Self {
        assert!(arity >= 1, "arity must be positive");
        let vars = var_names("x", arity);
        let root = root.map_polys(&|p| p.with_vars(&vars));
        PredicateAst { root, arity }
    }

    pub fn vars(&self) -> Vec<String> {
        var_names("x", self.arity)
    }

    pub fn padded(&self, arity: usize) -> PredicateAst {
        assert!(arity >= self.arity);
        PredicateAst::new(self.root.clone(), arity)
    }

    pub fn eval_at(&self, point: &[Rational]) -> Result<bool> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        Ok(self.root.eval(point))
    }

    /// True iff the predicate holds on every increasing `arity`-tuple of
    /// `seq`; vacuously true for shorter sequences.
    pub fn holds_everywhere(&self, seq: &[Rational]) -> bool {
        first_failing_tuple(self, seq).is_none()
    }

    /// True iff the predicate fails on every increasing tuple.
    pub fn holds_nowhere(&self, seq: &[Rational]) -> bool {
        let neg = self.negate();
        neg.holds_everywhere(seq)
    }

    pub fn negate(&self) -> PredicateAst {
        PredicateAst {
            root: self.root.negated(),
            arity: self.arity,
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        self.root.atoms()
    }

    /// `Φ(x_{idx[0]}, …, x_{idx[k-1]})` as a predicate of arity `arity`
    /// (indices are 0-based).
    pub fn substitute_indices(&self, idx: &[usize], arity: usize) -> Formula {
        let target = var_names("x", arity);
        self.root.map_polys(&|p| p.remap(&target, idx))
    }
}

impl fmt::Display for PredicateAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

/// Increasing index tuple on which `phi` fails, if any.
pub fn first_failing_tuple(phi: &PredicateAst, seq: &[Rational]) -> Option<Vec<usize>> {
    let k = phi.arity;
    if seq.len() < k {
        return None;
    }
    let mut point: Vec<Rational> = vec![Rational::zero(); k];
    let mut found = None;
    for_each_combination(seq.len(), k, &mut |idx| {
        for (slot, &i) in idx.iter().enumerate() {
            point[slot] = seq[i].clone();
        }
        if !phi.root.eval(&point) {
            found = Some(idx.to_vec());
            false
        } else {
            true
        }
    });
    found
}

/// Calls `visit` on every increasing `k`-subset of `0..n` in lexicographic
/// order until it returns `false`.
pub fn for_each_combination<F>(n: usize, k: usize, visit: &mut F)
where
    F: FnMut(&[usize]) -> bool,
{
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A finite set `{Φ1, …, Φm}`; members are padded to the common arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateSet {
    pub members: Vec<PredicateAst>,
    pub arity: usize,
}

impl PredicateSet {
    pub fn new(members: Vec<PredicateAst>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Invalid("predicate set must be nonempty".into()));
        }
        let arity = members.iter().map(|m| m.arity).max().unwrap();
        let members = members.into_iter().map(|m| m.padded(arity)).collect();
        Ok(PredicateSet { members, arity })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Distinct atom polynomials over `x1..x_arity`, in order of first use.
    pub fn atom_polys(&self) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        for m in &self.members {
            for a in m.atoms() {
                if !out.contains(&a.poly) {
                    out.push(a.poly.clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for PredicateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

pub fn disjunction_collapse(set: &PredicateSet) -> PredicateAst {
    let root = Formula::or(set.members.iter().map(|m| m.root.clone()).collect());
    PredicateAst::new(root, set.arity)
}

/// Single predicate of arity `r·k` holding everywhere on a sequence of length
/// at least `r·k` iff some member does: `⋁_i ⋀_{j1<…<jk} Φ_i(x_{j1}, …, x_{jk})`.
pub fn symmetrize_single(set: &PredicateSet, conjunct_cap: u128) -> Result<PredicateAst> {
    let k = set.arity;
    let big = set.len() * k;
    let per_member = crate::algebra::span::binomial(big as u64, k as u64);
    if per_member > conjunct_cap {
        return Err(Error::ResourceLimit(format!(
            "{per_member} conjuncts per member exceed the cap of {conjunct_cap}"
        )));
    }
    let mut disjuncts = Vec::with_capacity(set.len());
    for m in &set.members {
        let mut conj = Vec::new();
        for_each_combination(big, k, &mut |idx| {
            conj.push(m.substitute_indices(idx, big));
            true
        });
        disjuncts.push(Formula::and(conj));
    }
    Ok(PredicateAst::new(Formula::or(disjuncts), big))
}
