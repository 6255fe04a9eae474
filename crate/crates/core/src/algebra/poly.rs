//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A polynomial carries its own ordered variable list; a monomial is the
//! exponent vector aligned with that list. Binary operations on polynomials
//! with different variable lists first extend both operands to the union
//! (left operand's order, then the right operand's new names).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};

pub type Monomial = Vec<u32>;

/// `[1, x, x², …, x^top]`.
fn power_table<T>(x: &T, top: u32) -> Vec<T>
where
    T: Clone + One,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let mut out = vec![T::one()];
    for _ in 0..top {
        let next = out.last().unwrap() * x;
        out.push(next);
    }
    out
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn var_names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

impl MultiPoly {
    pub fn zero(vars: Vec<String>) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: Vec<String>) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The polynomial `vars[index]`.
    pub fn var(vars: Vec<String>, index: usize) -> Self {
        assert!(index < vars.len());
        let mut mono = vec![0; vars.len()];
        mono[index] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(mono, Rational::one());
        p
    }

    pub fn monomial(vars: Vec<String>, exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), p.vars.len());
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.nvars()).map(|i| self.degree_in(i)).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.degree_in(i) > 0).collect()
    }

    /// Highest-indexed variable with positive degree.
    pub fn main_var(&self) -> Option<usize> {
        (0..self.nvars()).rev().find(|&i| self.degree_in(i) > 0)
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Re-expresses the polynomial over `new_vars`, which must contain every
    /// variable that occurs with positive degree.
    pub fn with_vars(&self, new_vars: &[String]) -> Self {
        if self.vars == new_vars {
            return self.clone();
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = Self::zero(new_vars.to_vec());
        for (m, c) in &self.terms {
            let mut nm = vec![0; new_vars.len()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].unwrap_or_else(|| {
                    panic!("variable {} missing from target list", self.vars[i])
                });
                nm[j] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Renames variable `i` to position `mapping[i]` of `new_vars`.
    pub fn remap(&self, new_vars: &[String], mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.nvars());
        let mut out = Self::zero(new_vars.to_vec());
        for (m, c) in &self.terms {
            let mut nm = vec![0; new_vars.len()];
            for (i, &e) in m.iter().enumerate() {
                nm[mapping[i]] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned<'a>(
        &'a self,
        other: &'a Self,
    ) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        if self.vars == other.vars {
            return (Cow::Borrowed(self), Cow::Borrowed(other));
        }
        let vars = self.union_vars(other);
        (
            Cow::Owned(self.with_vars(&vars)),
            Cow::Owned(other.with_vars(&vars)),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert!(
            point.len() >= self.nvars(),
            "point has {} coordinates, polynomial needs {}",
            point.len(),
            self.nvars()
        );
        let nv = self.nvars();
        let top: Vec<u32> = (0..nv).map(|i| self.degree_in(i)).collect();
        let integral = point[..nv].iter().all(|x| x.is_integer())
            && self.terms.values().all(|c| c.is_integer());
        if integral {
            let powers: Vec<Vec<BigInt>> = (0..nv)
                .map(|i| power_table(point[i].numer(), top[i]))
                .collect();
            let mut acc = BigInt::zero();
            for (m, c) in &self.terms {
                let mut t = c.numer().clone();
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        t *= &powers[i][e as usize];
                    }
                }
                acc += t;
            }
            return Rational::from_integer(acc);
        }
        let powers: Vec<Vec<Rational>> = (0..nv).map(|i| power_table(&point[i], top[i])).collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `var := value`, keeping the variable list.
    pub fn substitute_value(&self, var: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m[var];
            let mut nm = m.clone();
            nm[var] = 0;
            let k = if e == 0 {
                c.clone()
            } else {
                c * rational::pow(value, e)
            };
            out.add_term(nm, k);
        }
        out
    }

    /// Composition: replaces variable `i` by `images[i]`; all images share the
    /// target variable list.
    pub fn compose(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_default();
        let mut cache: Vec<Vec<MultiPoly>> = vec![Vec::new(); images.len()];
        let mut out = Self::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = Self::constant(target.clone(), c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() < e as usize {
                    let next = match cache[i].last() {
                        Some(prev) => prev * &images[i],
                        None => images[i].clone(),
                    };
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize - 1];
            }
            out = &out + &t;
        }
        out
    }

    /// Coefficients with respect to `var`, indexed by power. The coefficient
    /// polynomials keep the full variable list.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.vars.clone()); d + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m[var] as usize;
            let mut nm = m.clone();
            nm[var] = 0;
            out[e].terms.insert(nm, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: Vec<String>, var: usize, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero(vars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                let mut nm = m.clone();
                nm[var] += e as u32;
                out.add_term(nm, k.clone());
            }
        }
        out
    }

    pub fn lead_coeff_in(&self, var: usize) -> MultiPoly {
        self.coeffs_in(var).pop().unwrap()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm[var] -= 1;
            out.add_term(nm, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (a, d) = self.aligned(divisor);
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = a.into_owned();
        let vars = rem.vars.clone();
        let mut quot = Self::zero(vars.clone());
        while let Some((rm, rc)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if rm.iter().zip(&dm).any(|(r, d)| r < d) {
                return None;
            }
            let tm: Monomial = rm.iter().zip(&dm).map(|(r, d)| r - d).collect();
            let tc = rc / &dc;
            let t = Self::monomial(vars.clone(), tm, tc);
            rem = &rem - &(&t * d.as_ref());
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Integer-coefficient primitive associate with positive leading
    /// coefficient, together with the factor `c` such that
    /// `self = c * result`.
    pub fn primitive(&self) -> (MultiPoly, Rational) {
        if self.is_zero() {
            return (self.clone(), Rational::one());
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * Rational::from_integer(lcm.clone())).to_integer();
            gcd = gcd.gcd(&n);
        }
        let mut factor = Rational::new(gcd, lcm);
        if self.leading_term().unwrap().1.is_negative() {
            factor = -factor;
        }
        let inv = factor.recip();
        (self.scale(&inv), factor)
    }

    /// Univariate view when only `var` occurs.
    pub fn univariate_coeffs(&self, var: usize) -> Option<Vec<Rational>> {
        if self
            .terms
            .keys()
            .any(|m| m.iter().enumerate().any(|(i, &e)| i != var && e > 0))
        {
            return None;
        }
        let d = self.degree_in(var) as usize;
        let mut out = vec![Rational::zero(); d + 1];
        for (m, c) in &self.terms {
            out[m[var] as usize] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(vars: Vec<String>, var: usize, coeffs: &[Rational]) -> Self {
        let n = vars.len();
        let mut out = Self::zero(vars);
        for (e, c) in coeffs.iter().enumerate() {
            let mut m = vec![0; n];
            m[var] = e as u32;
            out.add_term(m, c.clone());
        }
        out
    }

    /// Terms sorted for display: higher total degree first, then by exponent
    /// vector descending.
    fn display_order(&self) -> Vec<(&Monomial, &Rational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        ts
    }

    fn semantic_terms(&self) -> BTreeMap<Vec<(String, u32)>, Rational> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut key: Vec<(String, u32)> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (self.vars[i].clone(), e))
                    .collect();
                key.sort();
                (key, c.clone())
            })
            .collect()
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            self.terms == other.terms
        } else {
            self.semantic_terms() == other.semantic_terms()
        }
    }
}

impl Eq for MultiPoly {}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = a.into_owned();
        for (m, c) in &b.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = a.into_owned();
        for (m, c) in &b.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

fn monomial_product(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = MultiPoly::zero(a.vars.clone());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(monomial_product(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

fn fmt_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.display_order().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", fmt_coeff(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Ordering by comparing `(alpha_k, ..., alpha_1)` lexicographically
/// (`ascending`) or `(alpha_1, ..., alpha_k)` (`descending`).
pub fn compare_monomials(a: &[u32], b: &[u32], ascending: bool) -> Ordering {
    if ascending {
        a.iter().rev().cmp(b.iter().rev())
    } else {
        a.iter().cmp(b.iter())
    }
}
