//! Dense univariate polynomials over `Q` and real root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::poly::MultiPoly;
use crate::algebra::rational::{self, Rational};

/// Coefficients from the constant term up; never has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly {
    c: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(v: Rational) -> Self {
        UPoly::new(vec![v])
    }

    /// `x - v`
    pub fn linear_root(v: &Rational) -> Self {
        UPoly::new(vec![-v.clone(), Rational::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&x| rational::int(x)).collect())
    }

    /// Univariate view of `p` in `var`; `None` if other variables occur.
    pub fn from_multi(p: &MultiPoly, var: usize) -> Option<Self> {
        p.univariate_coeffs(var).map(UPoly::new)
    }

    pub fn to_multi(&self, vars: Vec<String>, var: usize) -> MultiPoly {
        MultiPoly::from_univariate(vars, var, &self.c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        rational::sign(&self.eval(x))
    }

    /// Sign as `x → +∞` (`at_pos`) or `x → −∞`.
    pub fn sign_at_infinity(&self, at_pos: bool) -> i8 {
        let s = rational::sign(&self.lead());
        if at_pos || self.degree().is_multiple_of(2) {
            s
        } else {
            -s
        }
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        UPoly::new(self.c.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let p = self.content_free();
        if p.lead().is_negative() {
            p.scale(&-Rational::one())
        } else {
            p
        }
    }

    /// Divides by the positive rational content; signs are kept.
    pub fn content_free(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .c
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .c
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        UPoly::new(ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect())
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.degree() < d.degree() || self.is_zero() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.lead();
        let dd = d.degree();
        let mut q = vec![Rational::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let t = &r[i + dd] / &dl;
            if !t.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[i + j] -= &t * dc;
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, made primitive.
    pub fn squarefree(&self) -> UPoly {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.primitive()
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// `1 + max |a_i / a_n|`: every real root lies strictly inside.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let m = self.c[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    pub fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.content_free()];
        let d = self.derivative().content_free();
        if d.is_zero() {
            return chain;
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.content_free().scale(&-Rational::one()));
        }
        chain
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_multi(vec!["x".into()], 0);
        write!(f, "{p}")
    }
}

/// Sign variations of a Sturm chain at `x`, or at `±∞` when `x` is `None`.
fn variations(chain: &[UPoly], x: Option<&Rational>, inf_pos: bool) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let s = match x {
            Some(x) => p.sign_at(x),
            None => p.sign_at_infinity(inf_pos),
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Distinct real roots of a nonzero polynomial via Sturm sequences.
pub struct Sturm {
    pub poly: UPoly,
    chain: Vec<UPoly>,
}

impl Sturm {
    pub fn new(p: &UPoly) -> Self {
        let poly = p.squarefree();
        let chain = poly.sturm_chain();
        Sturm { poly, chain }
    }

    pub fn var_at(&self, x: &Rational) -> usize {
        variations(&self.chain, Some(x), false)
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.var_at(a) - self.var_at(b)
    }

    /// Number of distinct roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &Rational, b: &Rational) -> usize {
        let c = self.count_half_open(a, b);
        if self.poly.sign_at(b) == 0 {
            c - 1
        } else {
            c
        }
    }

    pub fn count_all(&self) -> usize {
        variations(&self.chain, None, false) - variations(&self.chain, None, true)
    }
}

/// An isolating interval `(lo, hi)` with non-root endpoints, or an exact
/// rational root when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Disjoint isolating intervals for the distinct real roots of `p`, sorted.
pub fn isolate_real_roots(p: &UPoly) -> Vec<RootInterval> {
    assert!(!p.is_zero(), "isolating roots of the zero polynomial");
    if p.degree() == 0 {
        return Vec::new();
    }
    let s = Sturm::new(p);
    let b = s.poly.cauchy_bound();
    let mut out = Vec::new();
    isolate_in(&s, -b.clone(), b, &mut out);
    out
}

/// Roots in `(lo, hi)`; both endpoints are non-roots.
fn isolate_in(s: &Sturm, lo: Rational, hi: Rational, out: &mut Vec<RootInterval>) {
    let count = s.count_half_open(&lo, &hi);
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(RootInterval { lo, hi });
        return;
    }
    let two = rational::int(2);
    let mid = (&lo + &hi) / &two;
    if s.poly.sign_at(&mid) != 0 {
        isolate_in(s, lo, mid.clone(), out);
        isolate_in(s, mid, hi, out);
        return;
    }
    let mut eps = (&hi - &lo) / rational::int(4);
    loop {
        let (a, b) = (&mid - &eps, &mid + &eps);
        if s.poly.sign_at(&a) != 0 && s.poly.sign_at(&b) != 0 && s.count_half_open(&a, &b) == 1 {
            isolate_in(s, lo, a, out);
            out.push(RootInterval { lo: mid.clone(), hi: mid });
            isolate_in(s, b, hi, out);
            return;
        }
        eps /= &two;
    }
}
