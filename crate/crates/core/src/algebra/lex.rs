//! Lexicographic dominance of monomials on growing sequences.
//!
//! On an `R`-growing sequence every later term exceeds any fixed power of
//! the earlier ones once `R` is large, so along an increasing tuple the
//! monomial with the lexicographically largest `(α_k, …, α_1)` dominates the
//! whole polynomial.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{compare_monomials, MultiPoly, Monomial};
use super::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Tuples taken from an increasing growing sequence.
    Ascending,
    /// Tuples taken from the reversal of a growing sequence.
    Descending,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Ascending, Orientation::Descending];

    pub fn is_ascending(self) -> bool {
        self == Orientation::Ascending
    }
}

pub fn dominance_cmp(a: &[u32], b: &[u32], orientation: Orientation) -> Ordering {
    compare_monomials(a, b, orientation.is_ascending())
}

pub fn dominant_monomial<'a, I>(set: I, orientation: Orientation) -> Option<&'a Monomial>
where
    I: IntoIterator<Item = &'a Monomial>,
{
    set.into_iter()
        .max_by(|a, b| dominance_cmp(a, b, orientation))
}

pub fn lex_sign_on_growing(p: &MultiPoly) -> i8 {
    let lead = p
        .terms()
        .max_by(|(a, _), (b, _)| compare_monomials(a, b, true));
    match lead {
        None => 0,
        Some((_, c)) => rational::sign(c),
    }
}

/// An integer `R` for which [`lex_sign_on_growing`] is the sign of `p` on
/// every increasing tuple of every `R`-growing sequence.
///
/// With integer coefficients of absolute value at most `M`, `T` terms and
/// total degree `D`, each non-dominant monomial is at most `1/R` times the
/// dominant one as soon as `R ≥ D + 1`, so `R > (T − 1)·M` settles the sign.
pub fn sufficient_r(p: &MultiPoly) -> Rational {
    if p.is_constant() {
        return rational::int(3);
    }
    let (prim, _) = p.primitive();
    let m = prim.max_abs_coeff().to_integer();
    let t = BigInt::from(prim.num_terms() as u64);
    let d = BigInt::from(p.total_degree() as u64 + 1);
    let by_mass = (t - BigInt::one()) * m + BigInt::one();
    let r = by_mass.max(d).max(BigInt::from(3));
    Rational::from_integer(r)
}

/// Exact sign of `Σ c_i · base^{e_i}` for integer `base ≥ 2`, without
/// expanding the powers. Used to evaluate polynomials on sequences whose
/// terms are powers of a common base.
pub fn sign_of_power_sum(terms: &[(BigInt, BigInt)], base: &BigInt) -> i8 {
    assert!(base >= &BigInt::from(2));
    let mut ts: Vec<(BigInt, BigInt)> = Vec::new();
    let mut sorted: Vec<&(BigInt, BigInt)> = terms.iter().collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1));
    for (c, e) in sorted {
        match ts.last_mut() {
            Some(last) if &last.1 == e => last.0 += c,
            _ => ts.push((c.clone(), e.clone())),
        }
    }
    ts.retain(|(c, _)| !c.is_zero());
    if ts.is_empty() {
        return 0;
    }
    // suffix[i] = Σ_{j ≥ i} |c_j|
    let mut suffix = vec![BigInt::zero(); ts.len() + 1];
    for i in (0..ts.len()).rev() {
        suffix[i] = &suffix[i + 1] + ts[i].0.abs();
    }
    let mut acc = ts[0].0.clone();
    for i in 1..ts.len() {
        // value = base^{e_{i-1}} (acc + Σ_{j ≥ i} c_j base^{e_j − e_{i-1}})
        // and every tail factor is at most 1/base.
        if acc.abs() > suffix[i] {
            return sign_int(&acc);
        }
        let gap = &ts[i - 1].1 - &ts[i].1;
        if !acc.is_zero() {
            let bits = suffix[i].bits() + 1;
            if gap > BigInt::from(bits) {
                return sign_int(&acc);
            }
        }
        if acc.is_zero() {
            acc = ts[i].0.clone();
        } else {
            let g = gap.to_usize().expect("gap bounded by the branch above");
            acc = acc * num_traits::pow(base.clone(), g) + &ts[i].0;
        }
    }
    sign_int(&acc)
}

fn sign_int(n: &BigInt) -> i8 {
    if n.is_zero() {
        0
    } else if n.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of `p` at the point `(base^{e_1}, …, base^{e_k})`, exactly.
pub fn sign_at_powers(p: &MultiPoly, base: &BigInt, exps: &[BigInt]) -> i8 {
    let (prim, factor) = p.primitive();
    let terms: Vec<(BigInt, BigInt)> = prim
        .terms()
        .map(|(m, c)| {
            let e = m
                .iter()
                .zip(exps)
                .fold(BigInt::zero(), |acc, (&a, e)| acc + BigInt::from(a) * e);
            (c.to_integer(), e)
        })
        .collect();
    let s = sign_of_power_sum(&terms, base);
    if rational::sign(&factor) < 0 {
        -s
    } else {
        s
    }
}

/// Exponents `R^{i}` of the canonical sequence `R, R^R, R^{R²}, …` as powers
/// of `R`.
pub fn canonical_exponents(r: &BigInt, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let mut e = BigInt::one();
    for _ in 0..len {
        out.push(e.clone());
        e *= r;
    }
    out
}
