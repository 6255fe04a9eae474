//! Linear-algebra reduction of a polynomial family to a spanning subfamily.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::poly::{MultiPoly, Monomial};
use super::rational::Rational;

/// Binomial coefficient `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Greedy row reduction over `Q`. Returns the indices of a sublist whose
/// coefficient vectors span the same space as the whole list; zero
/// polynomials are never selected.
pub fn spanning_subset(polys: &[MultiPoly]) -> Vec<usize> {
    let mut vars: Vec<String> = Vec::new();
    for p in polys {
        for v in p.vars() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    // Echelon basis keyed by pivot monomial.
    let mut basis: BTreeMap<Monomial, BTreeMap<Monomial, Rational>> = BTreeMap::new();
    let mut chosen = Vec::new();
    for (idx, p) in polys.iter().enumerate() {
        let mut row: BTreeMap<Monomial, Rational> = p
            .with_vars(&vars)
            .terms()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        while let Some(pivot) = row.keys().next_back().cloned() {
            match basis.get(&pivot) {
                Some(b) => {
                    let factor = &row[&pivot] / &b[&pivot];
                    for (m, c) in b {
                        let v = row.entry(m.clone()).or_insert_with(Rational::zero);
                        *v -= &factor * c;
                        if v.is_zero() {
                            row.remove(m);
                        }
                    }
                }
                None => {
                    basis.insert(pivot, row);
                    chosen.push(idx);
                    break;
                }
            }
        }
    }
    chosen
}

pub fn rank(polys: &[MultiPoly]) -> usize {
    spanning_subset(polys).len()
}
