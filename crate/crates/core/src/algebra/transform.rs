//! The two-parametric transformations `X + Y·x` and `X + Y/x`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::{var_names, MultiPoly};
use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TransformKind {
    /// `x ↦ X + Y·x`
    F1,
    /// `x ↦ X + Y/x`
    F2,
}

impl TransformKind {
    pub const ALL: [TransformKind; 2] = [TransformKind::F1, TransformKind::F2];

    /// Applies the map to a single value; `None` when `F2` meets `x = 0`.
    pub fn apply(self, x: &Rational, a: &Rational, b: &Rational) -> Option<Rational> {
        match self {
            TransformKind::F1 => Some(a + b * x),
            TransformKind::F2 => {
                if x.is_zero() {
                    None
                } else {
                    Some(a + b / x)
                }
            }
        }
    }

    pub fn apply_all(self, xs: &[Rational], a: &Rational, b: &Rational) -> Option<Vec<Rational>> {
        xs.iter().map(|x| self.apply(x, a, b)).collect()
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformKind::F1 => write!(f, "F1"),
            TransformKind::F2 => write!(f, "F2"),
        }
    }
}

/// Quotient of two polynomials over a shared variable list. No gcd
/// cancellation is performed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFunction { num, den }
    }

    /// `None` when the denominator vanishes at the point.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }
}

/// Variable list `y1..yk, X, Y` used for transformed polynomials.
pub fn transformed_vars(k: usize) -> Vec<String> {
    let mut v = var_names("y", k);
    v.push("X".into());
    v.push("Y".into());
    v
}

/// Substitutes `x_i = f(y_i, X, Y)` into `p` (a polynomial whose `i`-th
/// variable plays the role of `x_i`) and clears denominators. Under `F2` the
/// denominator is `∏ y_i^{d_i}` with `d_i = deg_{x_i} p`.
pub fn substitute_transform(p: &MultiPoly, kind: TransformKind) -> (MultiPoly, MultiPoly) {
    let k = p.nvars();
    let vars = transformed_vars(k);
    let x_var = MultiPoly::var(vars.clone(), k);
    let y_var = MultiPoly::var(vars.clone(), k + 1);
    match kind {
        TransformKind::F1 => {
            let images: Vec<MultiPoly> = (0..k)
                .map(|i| &x_var + &(&y_var * &MultiPoly::var(vars.clone(), i)))
                .collect();
            (p.compose(&images), MultiPoly::one(vars))
        }
        TransformKind::F2 => {
            let degs = p.degrees();
            // x_i = (X y_i + Y) / y_i
            let lifted: Vec<MultiPoly> = (0..k)
                .map(|i| &(&x_var * &MultiPoly::var(vars.clone(), i)) + &y_var)
                .collect();
            let mut num = MultiPoly::zero(vars.clone());
            for (m, c) in p.terms() {
                let mut t = MultiPoly::constant(vars.clone(), c.clone());
                for i in 0..k {
                    if m[i] > 0 {
                        t = &t * &lifted[i].pow(m[i]);
                    }
                    let rest = degs[i] - m[i];
                    if rest > 0 {
                        t = &t * &MultiPoly::var(vars.clone(), i).pow(rest);
                    }
                }
                num = &num + &t;
            }
            let mut den_exp = vec![0u32; k + 2];
            den_exp[..k].copy_from_slice(&degs);
            let den = MultiPoly::monomial(vars, den_exp, Rational::from_integer(1.into()));
            (num, den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, ratio};

    fn xs(k: usize) -> Vec<String> {
        var_names("x", k)
    }

    #[test]
    fn bilinear_under_reciprocal_map() {
        let p = &MultiPoly::var(xs(2), 0) * &MultiPoly::var(xs(2), 1);
        let (num, den) = substitute_transform(&p, TransformKind::F2);
        assert_eq!(num.to_string(), "y1*y2*X^2 + y1*X*Y + y2*X*Y + Y^2");
        assert_eq!(den.to_string(), "y1*y2");
    }

    #[test]
    fn difference_under_affine_map() {
        let p = &MultiPoly::var(xs(2), 0) - &MultiPoly::var(xs(2), 1);
        let (num, den) = substitute_transform(&p, TransformKind::F1);
        assert_eq!(num.to_string(), "y1*Y - y2*Y");
        assert!(den.constant_value() == Some(int(1)));
    }

    #[test]
    fn constants_are_unaffected() {
        let p = MultiPoly::constant(xs(2), int(7));
        for kind in TransformKind::ALL {
            let (num, den) = substitute_transform(&p, kind);
            assert_eq!(num.constant_value(), Some(int(7)));
            assert_eq!(den.constant_value(), Some(int(1)));
        }
    }

    #[test]
    fn agrees_with_pointwise_substitution() {
        let x1 = MultiPoly::var(xs(2), 0);
        let x2 = MultiPoly::var(xs(2), 1);
        let p = &(&x1.pow(2) * &x2) - &x2.scale(&ratio(3, 2));
        let ys = [ratio(2, 3), int(-5)];
        let (a, b) = (ratio(1, 7), int(3));
        for kind in TransformKind::ALL {
            let (num, den) = substitute_transform(&p, kind);
            let point = [ys[0].clone(), ys[1].clone(), a.clone(), b.clone()];
            let lhs = RationalFunction::new(num, den).eval(&point).unwrap();
            let xs = kind.apply_all(&ys, &a, &b).unwrap();
            assert_eq!(lhs, p.eval(&xs));
        }
    }
}
