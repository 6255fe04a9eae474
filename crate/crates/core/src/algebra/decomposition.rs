//! Splitting `q(y, X, Y)` into `Σ_α q_α(X, Y) y^α`.

use std::collections::BTreeMap;

use super::poly::{MultiPoly, Monomial};

/// The coefficient polynomials of `q` viewed as a polynomial in the first
/// `k` variables (the `y`s) with coefficients in the remaining two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDecomposition {
    pub source: MultiPoly,
    pub k: usize,
    /// `α ↦ q_α`, each over `[X, Y]` and nonzero.
    pub coeffs: BTreeMap<Monomial, MultiPoly>,
}

pub fn xy_vars() -> Vec<String> {
    vec!["X".into(), "Y".into()]
}

impl CoefficientDecomposition {
    /// `q` must be over `y1..yk, X, Y` in that order.
    pub fn new(q: &MultiPoly) -> Self {
        let n = q.nvars();
        assert!(n >= 2, "expected variables y1..yk, X, Y");
        let k = n - 2;
        let mut coeffs: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (m, c) in q.terms() {
            let alpha = m[..k].to_vec();
            let rest = vec![m[k], m[k + 1]];
            let entry = coeffs
                .entry(alpha)
                .or_insert_with(|| MultiPoly::zero(xy_vars()));
            *entry = &*entry + &MultiPoly::monomial(xy_vars(), rest, c.clone());
        }
        coeffs.retain(|_, p| !p.is_zero());
        CoefficientDecomposition {
            source: q.clone(),
            k,
            coeffs,
        }
    }

    /// `Λ(q)`, in increasing exponent-vector order.
    pub fn support(&self) -> Vec<Monomial> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn coeff(&self, alpha: &[u32]) -> Option<&MultiPoly> {
        self.coeffs.get(alpha)
    }

    pub fn reassemble(&self) -> MultiPoly {
        let vars = self.source.vars().to_vec();
        let mut out = MultiPoly::zero(vars.clone());
        for (alpha, q) in &self.coeffs {
            for (m, c) in q.terms() {
                let mut full = alpha.clone();
                full.extend_from_slice(m);
                out = &out + &MultiPoly::monomial(vars.clone(), full, c.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::var_names;
    use crate::algebra::transform::{substitute_transform, TransformKind};

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(var_names("x", 2), i)
    }

    #[test]
    fn grouping_of_affine_difference() {
        let (q, _) = substitute_transform(&(&x(0) - &x(1)), TransformKind::F1);
        let d = CoefficientDecomposition::new(&q);
        assert_eq!(d.support(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(d.coeff(&[1, 0]).unwrap().to_string(), "Y");
        assert_eq!(d.coeff(&[0, 1]).unwrap().to_string(), "-Y");
        assert_eq!(d.reassemble(), q);
    }

    #[test]
    fn reciprocal_bilinear_support() {
        let (num, den) = substitute_transform(&(&x(0) * &x(1)), TransformKind::F2);
        let d = CoefficientDecomposition::new(&num);
        assert_eq!(d.support().len(), 4);
        let dd = CoefficientDecomposition::new(&den);
        assert_eq!(dd.support(), vec![vec![1, 1]]);
        assert_eq!(dd.coeff(&[1, 1]).unwrap().to_string(), "1");
    }
}
