//! Real algebraic numbers and exact sign determination at algebraic points.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::resultant::resultant;
use super::upoly::{isolate_real_roots, RootInterval, Sturm, UPoly};
use crate::algebra::poly::MultiPoly;
use crate::algebra::rational::{self, Rational};
use crate::error::{Error, Result};

/// The unique root of `poly` in the open interval `(lo, hi)`. `poly` is
/// squarefree and primitive and does not vanish at either endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgNum {
    pub poly: UPoly,
    pub lo: Rational,
    pub hi: Rational,
    lo_sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealNum {
    Rat(Rational),
    Alg(AlgNum),
}

impl From<Rational> for RealNum {
    fn from(q: Rational) -> Self {
        RealNum::Rat(q)
    }
}

impl RealNum {
    /// The root of `p` isolated by `iv`, reduced to a rational when it is one.
    pub fn from_root(p: &UPoly, iv: &RootInterval) -> RealNum {
        if iv.is_exact() {
            return RealNum::Rat(iv.lo.clone());
        }
        let poly = p.squarefree();
        if poly.degree() == 1 {
            let c = poly.coeffs();
            return RealNum::Rat(-&c[0] / &c[1]);
        }
        let lo_sign = poly.sign_at(&iv.lo);
        debug_assert!(lo_sign != 0 && poly.sign_at(&iv.hi) == -lo_sign);
        let a = AlgNum {
            poly,
            lo: iv.lo.clone(),
            hi: iv.hi.clone(),
            lo_sign,
        };
        a.detect_rational()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealNum::Rat(q) => Some(q),
            RealNum::Alg(_) => None,
        }
    }

    /// Bounds `lo ≤ self ≤ hi`.
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            RealNum::Rat(q) => (q.clone(), q.clone()),
            RealNum::Alg(a) => (a.lo.clone(), a.hi.clone()),
        }
    }

    /// Halves the isolating interval; may turn the number into a rational.
    pub fn refine(&mut self) {
        if let RealNum::Alg(a) = self {
            if let Some(q) = a.bisect() {
                *self = RealNum::Rat(q);
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds();
        (rational::to_f64(&lo) + rational::to_f64(&hi)) / 2.0
    }

    pub fn cmp_rational(&mut self, q: &Rational) -> Ordering {
        loop {
            match self {
                RealNum::Rat(r) => return (*r).cmp(q),
                RealNum::Alg(a) => {
                    if q <= &a.lo {
                        return Ordering::Greater;
                    }
                    if q >= &a.hi {
                        return Ordering::Less;
                    }
                    if a.poly.sign_at(q) == 0 {
                        return Ordering::Equal;
                    }
                }
            }
            self.refine();
        }
    }

    pub fn cmp_real(&mut self, other: &mut RealNum) -> Ordering {
        if let RealNum::Rat(q) = other {
            return self.cmp_rational(q);
        }
        if let RealNum::Rat(q) = self {
            let q = q.clone();
            return other.cmp_rational(&q).reverse();
        }
        let (RealNum::Alg(a), RealNum::Alg(b)) = (&*self, &*other) else {
            unreachable!()
        };
        let g = a.poly.gcd(&b.poly);
        let lo = (&a.lo).max(&b.lo).clone();
        let hi = (&a.hi).min(&b.hi).clone();
        if g.degree() > 0 && lo < hi && Sturm::new(&g).count_open(&lo, &hi) > 0 {
            return Ordering::Equal;
        }
        loop {
            let ((alo, ahi), (blo, bhi)) = (self.bounds(), other.bounds());
            if ahi < blo || (ahi == blo && !(self.is_rat() && other.is_rat())) {
                return Ordering::Less;
            }
            if bhi < alo || (bhi == alo && !(self.is_rat() && other.is_rat())) {
                return Ordering::Greater;
            }
            if self.is_rat() && other.is_rat() {
                return alo.cmp(&blo);
            }
            self.refine();
            other.refine();
        }
    }

    fn is_rat(&self) -> bool {
        matches!(self, RealNum::Rat(_))
    }
}

impl AlgNum {
    fn bisect(&mut self) -> Option<Rational> {
        let mid = (&self.lo + &self.hi) / rational::int(2);
        let s = self.poly.sign_at(&mid);
        if s == 0 {
            return Some(mid);
        }
        if s == self.lo_sign {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
        None
    }

    /// A rational root `p/q` of an integer polynomial has `q | lc`; once
    /// the interval is narrower than `1/lc²`, the simplest rational inside
    /// is the only candidate.
    fn detect_rational(mut self) -> RealNum {
        let lc = self.poly.lead().abs();
        let limit = (&lc * &lc).recip();
        while &self.hi - &self.lo >= limit {
            if let Some(q) = self.bisect() {
                return RealNum::Rat(q);
            }
        }
        let c = rational::simplest_between(&self.lo, &self.hi);
        if self.poly.sign_at(&c) == 0 {
            RealNum::Rat(c)
        } else {
            RealNum::Alg(self)
        }
    }
}

impl fmt::Display for RealNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealNum::Rat(q) => write!(f, "{q}"),
            RealNum::Alg(a) => write!(f, "root of {} in ({}, {})", a.poly, a.lo, a.hi),
        }
    }
}

/// Exact sign of the univariate `p` at `x`.
pub fn alg_sign_at(p: &UPoly, x: &mut RealNum) -> i8 {
    if let RealNum::Rat(q) = x {
        return p.sign_at(q);
    }
    if p.is_zero() {
        return 0;
    }
    if let RealNum::Alg(a) = &*x {
        let g = p.gcd(&a.poly);
        if g.degree() > 0 && Sturm::new(&g).count_open(&a.lo, &a.hi) > 0 {
            return 0;
        }
    }
    let sturm = Sturm::new(p);
    loop {
        let (lo, hi) = x.bounds();
        if lo == hi {
            return p.sign_at(&lo);
        }
        let (slo, shi) = (p.sign_at(&lo), p.sign_at(&hi));
        if slo != 0 && slo == shi && sturm.count_open(&lo, &hi) == 0 {
            return slo;
        }
        x.refine();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        Interval {
            lo: c.iter().min().unwrap().clone(),
            hi: c.iter().max().unwrap().clone(),
        }
    }

    fn pow(&self, e: u32) -> Interval {
        let (a, b) = (rational::pow(&self.lo, e), rational::pow(&self.hi, e));
        if e % 2 == 1 {
            return Interval { lo: a, hi: b };
        }
        if self.lo.is_negative() && self.hi.is_positive() {
            return Interval {
                lo: Rational::zero(),
                hi: a.max(b),
            };
        }
        Interval {
            lo: (&a).min(&b).clone(),
            hi: a.max(b),
        }
    }

    fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }
}

fn eval_box(p: &MultiPoly, point: &[RealNum]) -> Interval {
    let boxes: Vec<Interval> = point
        .iter()
        .map(|x| {
            let (lo, hi) = x.bounds();
            Interval { lo, hi }
        })
        .collect();
    let mut acc = Interval::point(Rational::zero());
    for (m, c) in p.terms() {
        let mut t = Interval::point(Rational::one());
        for (v, &e) in m.iter().enumerate() {
            if e > 0 {
                t = t.mul(&boxes[v].pow(e));
            }
        }
        acc = acc.add(&t.scale(c));
    }
    acc
}

/// Substitutes every rational coordinate of `point` into `p`.
pub fn substitute_rationals(p: &MultiPoly, point: &[RealNum]) -> MultiPoly {
    let mut out = p.clone();
    for (v, x) in point.iter().enumerate() {
        if let RealNum::Rat(q) = x {
            if out.degree_in(v) > 0 {
                out = out.substitute_value(v, q);
            }
        }
    }
    out
}

/// `res_{x_v}(m_v, p)` for every algebraic coordinate `v` that occurs.
fn eliminate(p: &MultiPoly, point: &[RealNum], skip_zero: bool) -> Option<MultiPoly> {
    let mut t = p.clone();
    for (v, x) in point.iter().enumerate() {
        if let RealNum::Alg(a) = x {
            if t.degree_in(v) == 0 {
                continue;
            }
            let m = a.poly.to_multi(t.vars().to_vec(), v);
            t = resultant(&m, &t, v);
            if t.is_zero() && skip_zero {
                return None;
            }
        }
    }
    Some(t)
}

/// Exact sign of `p` at a point whose coordinates are real numbers; `p`
/// may only involve the first `point.len()` variables.
pub fn sign_at_point(p: &MultiPoly, point: &mut [RealNum]) -> i8 {
    let q = substitute_rationals(p, point);
    if let Some(c) = q.constant_value() {
        return rational::sign(&c);
    }
    let used = q.used_vars();
    if used.len() == 1 {
        let v = used[0];
        return alg_sign_at(&UPoly::from_multi(&q, v).unwrap(), &mut point[v]);
    }
    // z − q(x) eliminated against every defining polynomial gives a
    // univariate polynomial vanishing at q(point); it is never identically
    // zero because z − q is monic in z.
    let mut vars = q.vars().to_vec();
    vars.push("__z".into());
    let zi = vars.len() - 1;
    let z = MultiPoly::var(vars.clone(), zi);
    let t = &z - &q.with_vars(&vars);
    let r = eliminate(&t, point, false).expect("monic elimination");
    let r = UPoly::from_multi(&r, zi).expect("univariate elimination result");
    let coeffs = r.coeffs();
    let zero_root = coeffs[0].is_zero();
    let delta = if zero_root {
        let k = coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let a0 = coeffs[k].abs();
        let m = coeffs[k + 1..]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        Some(&a0 / (&a0 + m))
    } else {
        None
    };
    loop {
        let iv = eval_box(&q, point);
        if iv.lo.is_positive() {
            return 1;
        }
        if iv.hi.is_negative() {
            return -1;
        }
        if let Some(d) = &delta {
            if iv.lo > -d && &iv.hi < d {
                return 0;
            }
        }
        for x in point.iter_mut() {
            x.refine();
        }
    }
}

/// Distinct real roots, in increasing order, of `p(point, x)` where `x` is
/// the variable right after the point. Returns `Ok(None)` when `p`
/// vanishes identically over the point.
pub fn roots_over(p: &MultiPoly, point: &mut [RealNum]) -> Result<Option<Vec<RealNum>>> {
    let x = point.len();
    let q = substitute_rationals(p, point);
    let coeffs = q.coeffs_in(x);
    let mut live = Vec::new();
    for (e, c) in coeffs.iter().enumerate() {
        if !c.is_zero() && sign_at_point(c, point) != 0 {
            live.push(e);
        }
    }
    if live.is_empty() {
        return Ok(None);
    }
    if live == [0] {
        return Ok(Some(Vec::new()));
    }
    // Drop the coefficients that vanish at the point.
    let vars = q.vars().to_vec();
    let mut reduced = MultiPoly::zero(vars.clone());
    for &e in &live {
        let mut m = vec![0; vars.len()];
        m[x] = e as u32;
        reduced = &reduced + &(&coeffs[e] * &MultiPoly::monomial(vars.clone(), m, Rational::one()));
    }
    if let Some(u) = UPoly::from_multi(&reduced, x) {
        return Ok(Some(
            isolate_real_roots(&u)
                .iter()
                .map(|iv| RealNum::from_root(&u, iv))
                .collect(),
        ));
    }
    let elim = eliminate_splitting(&reduced, point)?;
    let e = UPoly::from_multi(&elim, x).expect("elimination leaves one variable");
    let mut out = Vec::new();
    for iv in isolate_real_roots(&e) {
        let mut cand = RealNum::from_root(&e, &iv);
        let mut full: Vec<RealNum> = point.to_vec();
        full.push(cand.clone());
        if sign_at_point(&reduced, &mut full) == 0 {
            cand = full.pop().unwrap();
            point.clone_from_slice(&full);
            out.push(cand);
        }
    }
    Ok(Some(out))
}

/// Eliminates the algebraic coordinates; when a defining polynomial shares
/// a factor that nullifies `p` at a conjugate, that factor is split off.
fn eliminate_splitting(p: &MultiPoly, point: &mut [RealNum]) -> Result<MultiPoly> {
    for _ in 0..point.len() + 1 {
        if let Some(e) = eliminate(p, point, true) {
            return Ok(e);
        }
        let mut progressed = false;
        #[allow(clippy::needless_range_loop)]
        for v in 0..point.len() {
            let RealNum::Alg(a) = &point[v] else { continue };
            if p.degree_in(v) == 0 {
                continue;
            }
            // gcd of m_v with every coefficient of p that involves x_v only
            let mut g = a.poly.clone();
            for c in coefficients_over(p, v) {
                match UPoly::from_multi(&c, v) {
                    Some(u) => g = g.gcd(&u),
                    None => {
                        g = UPoly::constant(Rational::one());
                        break;
                    }
                }
            }
            if g.degree() == 0 || g.degree() == a.poly.degree() {
                continue;
            }
            let rest = a.poly.div_rem(&g).0.primitive();
            let inside = |u: &UPoly| Sturm::new(u).count_open(&a.lo, &a.hi) > 0;
            let keep = if inside(&g) { g } else { rest };
            debug_assert!(inside(&keep));
            let (lo, hi) = (a.lo.clone(), a.hi.clone());
            point[v] = RealNum::from_root(&keep, &RootInterval { lo, hi });
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    Err(Error::ResourceLimit(
        "conjugate nullification while lifting over an algebraic point".into(),
    ))
}

/// Coefficients of `p` viewed as a polynomial in every variable except `v`.
fn coefficients_over(p: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let vars = p.vars().to_vec();
    let mut groups: std::collections::BTreeMap<Vec<u32>, MultiPoly> = Default::default();
    for (m, c) in p.terms() {
        let mut key = m.clone();
        key[v] = 0;
        let mut mono = vec![0; vars.len()];
        mono[v] = m[v];
        let t = MultiPoly::monomial(vars.clone(), mono, c.clone());
        let entry = groups.entry(key).or_insert_with(|| MultiPoly::zero(vars.clone()));
        *entry = &*entry + &t;
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, ratio};

    fn sqrt2() -> RealNum {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p);
        RealNum::from_root(&p, &roots[1])
    }

    #[test]
    fn signs_at_sqrt_two() {
        let mut a = sqrt2();
        assert!(matches!(a, RealNum::Alg(_)));
        assert_eq!(alg_sign_at(&UPoly::from_ints(&[-2, 0, 1]), &mut a), 0);
        assert_eq!(alg_sign_at(&UPoly::from_ints(&[-1, 1]), &mut a), 1);
        assert_eq!(alg_sign_at(&UPoly::new(vec![ratio(-3, 2), int(1)]), &mut a), -1);
        // x^4 - 4 shares the factor x^2 - 2
        assert_eq!(alg_sign_at(&UPoly::from_ints(&[-4, 0, 0, 0, 1]), &mut a), 0);
    }

    #[test]
    fn rational_roots_are_detected() {
        // (3x - 1)(x^2 - 2)
        let p = UPoly::from_ints(&[2, -6, -1, 3]);
        let roots: Vec<RealNum> = isolate_real_roots(&p)
            .iter()
            .map(|iv| RealNum::from_root(&p, iv))
            .collect();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1], RealNum::Rat(ratio(1, 3)));
        assert!(matches!(roots[0], RealNum::Alg(_)));
    }

    #[test]
    fn comparisons() {
        let mut a = sqrt2();
        let mut b = sqrt2();
        assert_eq!(a.cmp_real(&mut b), Ordering::Equal);
        assert_eq!(a.cmp_rational(&ratio(7, 5)), Ordering::Greater);
        assert_eq!(a.cmp_rational(&ratio(3, 2)), Ordering::Less);
        let p = UPoly::from_ints(&[-3, 0, 1]);
        let mut c = RealNum::from_root(&p, &isolate_real_roots(&p)[1]);
        assert_eq!(a.cmp_real(&mut c), Ordering::Less);
    }

    #[test]
    fn multivariate_signs() {
        let vars: Vec<String> = vec!["a".into(), "b".into()];
        let a = MultiPoly::var(vars.clone(), 0);
        let b = MultiPoly::var(vars.clone(), 1);
        let mut pt = vec![sqrt2(), sqrt2()];
        // a*b - 2 = 0 at (√2, √2); a - b = 0; a + b > 0
        let two = MultiPoly::constant(vars.clone(), int(2));
        assert_eq!(sign_at_point(&(&(&a * &b) - &two), &mut pt), 0);
        assert_eq!(sign_at_point(&(&a - &b), &mut pt), 0);
        assert_eq!(sign_at_point(&(&a + &b), &mut pt), 1);
        assert_eq!(sign_at_point(&(&(&a * &b) - &MultiPoly::constant(vars, int(3))), &mut pt), -1);
    }

    #[test]
    fn lifting_over_algebraic_point() {
        let vars: Vec<String> = vec!["a".into(), "y".into()];
        let a = MultiPoly::var(vars.clone(), 0);
        let y = MultiPoly::var(vars.clone(), 1);
        // y^2 - a over a = √2: roots ±2^{1/4}
        let mut pt = vec![sqrt2()];
        let roots = roots_over(&(&(&y * &y) - &a), &mut pt).unwrap().unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].to_f64() + 1.189 < 0.01);
        // (a^2 - 2) y vanishes identically over √2
        let two = MultiPoly::constant(vars.clone(), int(2));
        let p = &(&(&a * &a) - &two) * &y;
        assert_eq!(roots_over(&p, &mut pt).unwrap(), None);
        // a*y - 2 = 0 at y = √2
        let roots = roots_over(&(&(&a * &y) - &two), &mut pt).unwrap().unwrap();
        assert_eq!(roots.len(), 1);
        let mut r = roots[0].clone();
        assert_eq!(r.cmp_real(&mut sqrt2()), Ordering::Equal);
    }

    #[test]
    fn conjugate_factor_is_split() {
        // Point a = √2 described by (a - 1)(a^2 - 2); p = (a - 1) y - 1
        // vanishes identically at the conjugate a = 1.
        let m = UPoly::from_ints(&[2, -2, -1, 1]);
        let roots = isolate_real_roots(&m);
        let mut pt = vec![RealNum::from_root(&m, &roots[2])];
        assert!(matches!(pt[0], RealNum::Alg(_)));
        let vars: Vec<String> = vec!["a".into(), "y".into()];
        let a = MultiPoly::var(vars.clone(), 0);
        let y = MultiPoly::var(vars.clone(), 1);
        let one = MultiPoly::one(vars.clone());
        let p = &(&(&a - &one) * &(&y * &y)) - &(&a - &one);
        let r = roots_over(&p, &mut pt).unwrap().unwrap();
        assert_eq!(r.len(), 2);
    }
}
