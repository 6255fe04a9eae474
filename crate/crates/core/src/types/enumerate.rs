//! Enumeration of candidate types, pruned by the local validity rules.

use super::{CandidateType, CoefficientSystem, EntryType, Tag};
use crate::algebra::span::binomial;
use crate::error::{Error, Result};

/// Cartesian product of a list of choice lists, in odometer order.
#[derive(Clone, Debug)]
pub struct Odometer<T: Clone> {
    lists: Vec<Vec<T>>,
    idx: Vec<usize>,
    done: bool,
}

impl<T: Clone> Odometer<T> {
    pub fn new(lists: Vec<Vec<T>>) -> Self {
        let done = lists.iter().any(|l| l.is_empty());
        let idx = vec![0; lists.len()];
        Odometer { lists, idx, done }
    }

    pub fn len(&self) -> u128 {
        self.lists
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: Clone> Iterator for Odometer<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        let item = self
            .idx
            .iter()
            .zip(&self.lists)
            .map(|(&i, l)| l[i].clone())
            .collect();
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.lists[pos].len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(item)
    }
}

const SIGNS: [i8; 3] = [1, -1, 0];

fn all_sign_vectors(m: usize) -> Vec<Vec<i8>> {
    Odometer::new(vec![SIGNS.to_vec(); m]).collect()
}

fn sigma_list(forced_positive: bool, m: usize) -> Vec<Vec<i8>> {
    if forced_positive {
        vec![vec![1; m]]
    } else {
        all_sign_vectors(m)
    }
}

/// Every τ compatible with `sigma` under the local rules.
pub fn tau_options(sigma: &[i8]) -> Vec<Vec<Vec<Tag>>> {
    let m = sigma.len();
    let mut pairs = Vec::new();
    let mut choices = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            pairs.push((i, j));
            let opts = match (sigma[i] != 0, sigma[j] != 0) {
                (false, false) => vec![(Tag::G, Tag::G)],
                (true, false) => vec![(Tag::G, Tag::D)],
                (false, true) => vec![(Tag::D, Tag::G)],
                (true, true) => vec![(Tag::D, Tag::D), (Tag::D, Tag::G), (Tag::G, Tag::D)],
            };
            choices.push(opts);
        }
    }
    Odometer::new(choices)
        .map(|pick| {
            let mut tau = vec![vec![Tag::D; m]; m];
            for (&(i, j), &(tij, tji)) in pairs.iter().zip(&pick) {
                tau[i][j] = tij;
                tau[j][i] = tji;
            }
            tau
        })
        .collect()
}

fn pow3(e: u128) -> u128 {
    if e >= 81 {
        return u128::MAX;
    }
    3u128.pow(e as u32)
}

fn entry_count(forced_positive: bool, m: usize) -> u128 {
    let pairs = |j: usize| binomial(j as u64, 2);
    if forced_positive {
        return pow3(pairs(m));
    }
    // Σ_j C(m, j) 2^j 3^{C(j,2)} over the number j of nonzero signs.
    (0..=m).fold(0u128, |acc, j| {
        let term = binomial(m as u64, j as u64)
            .saturating_mul(1u128.checked_shl(j as u32).unwrap_or(u128::MAX))
            .saturating_mul(pow3(pairs(j)));
        acc.saturating_add(term)
    })
}

/// Number of valid candidate types (saturating).
pub fn count_types(q: &CoefficientSystem) -> u128 {
    q.entries.iter().fold(1u128, |acc, e| {
        acc.saturating_mul(entry_count(e.denominator, e.len()))
    })
}

/// Joint σ assignments for all entries.
pub fn enumerate_sigmas(q: &CoefficientSystem) -> Odometer<Vec<i8>> {
    Odometer::new(
        q.entries
            .iter()
            .map(|e| sigma_list(e.denominator, e.len()))
            .collect(),
    )
}

/// Joint τ assignments compatible with fixed σ's.
pub fn enumerate_taus(sigmas: &[Vec<i8>]) -> Odometer<Vec<Vec<Tag>>> {
    Odometer::new(sigmas.iter().map(|s| tau_options(s)).collect())
}

type TauOdometer = Odometer<Vec<Vec<Tag>>>;

/// All valid types: σ outer, τ inner.
pub struct TypeIter {
    sigmas: Odometer<Vec<i8>>,
    current: Option<(Vec<Vec<i8>>, TauOdometer)>,
}

impl Iterator for TypeIter {
    type Item = CandidateType;

    fn next(&mut self) -> Option<CandidateType> {
        loop {
            if let Some((sig, taus)) = &mut self.current {
                if let Some(tau) = taus.next() {
                    let entries = sig
                        .iter()
                        .zip(tau)
                        .map(|(s, t)| EntryType { sigma: s.clone(), tau: t })
                        .collect();
                    return Some(CandidateType { entries });
                }
            }
            let sig = self.sigmas.next()?;
            let taus = enumerate_taus(&sig);
            self.current = Some((sig, taus));
        }
    }
}

pub fn enumerate_types(q: &CoefficientSystem, cap: u128) -> Result<TypeIter> {
    let count = count_types(q);
    if count > cap {
        return Err(Error::ResourceLimit(format!(
            "{count} candidate types exceed the cap of {cap}"
        )));
    }
    Ok(TypeIter {
        sigmas: enumerate_sigmas(q),
        current: None,
    })
}

/// Every `(σ, τ)` with no pruning at all, for cross-checking the local rules.
pub fn enumerate_types_unpruned(
    q: &CoefficientSystem,
    cap: u128,
) -> Result<impl Iterator<Item = CandidateType>> {
    let mut per_entry = Vec::new();
    let mut count = 1u128;
    for e in &q.entries {
        let m = e.len();
        let offdiag = m * m.saturating_sub(1);
        let n = pow3(m as u128).saturating_mul(1u128.checked_shl(offdiag as u32).unwrap_or(u128::MAX));
        count = count.saturating_mul(n);
        if count > cap {
            return Err(Error::ResourceLimit(format!(
                "unpruned type space exceeds the cap of {cap}"
            )));
        }
        let mut list = Vec::new();
        for sigma in all_sign_vectors(m) {
            for bits in 0..(1u64 << offdiag) {
                let mut tau = vec![vec![Tag::D; m]; m];
                let mut k = 0;
                for (i, row) in tau.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        if i != j {
                            if bits >> k & 1 == 1 {
                                *cell = Tag::G;
                            }
                            k += 1;
                        }
                    }
                }
                list.push(EntryType { sigma: sigma.clone(), tau });
            }
        }
        per_entry.push(list);
    }
    Ok(Odometer::new(per_entry).map(|entries| CandidateType { entries }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::transform::TransformKind;
    use crate::predicate::parse;
    use crate::types::build_q;

    #[test]
    fn odometer_order() {
        let v: Vec<_> = Odometer::new(vec![vec![0, 1], vec![5, 6, 7]]).collect();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], vec![0, 5]);
        assert_eq!(v[1], vec![0, 6]);
        assert_eq!(v[5], vec![1, 7]);
        assert_eq!(Odometer::<u8>::new(vec![]).count(), 1);
        assert_eq!(Odometer::<u8>::new(vec![vec![]]).count(), 0);
    }

    #[test]
    fn two_element_support_count() {
        // 1 (both zero) + 2·2 (one nonzero) + 4·3 (both nonzero)
        assert_eq!(entry_count(false, 2), 17);
        assert_eq!(entry_count(false, 1), 3);
        assert_eq!(entry_count(true, 3), 27);
        let q = build_q(&parse("x1 < x2").unwrap(), TransformKind::F1);
        assert_eq!(count_types(&q), 17);
        assert_eq!(enumerate_types(&q, 100).unwrap().count(), 17);
    }

    #[test]
    fn pruned_equals_filtered_unpruned() {
        for text in ["x1 < x2", "x1*x2 > 1", "x1 + x2 > 0"] {
            for kind in TransformKind::ALL {
                let q = build_q(&parse(text).unwrap(), kind);
                if count_types(&q) > 5000 {
                    continue;
                }
                let pruned: Vec<_> = enumerate_types(&q, 5000).unwrap().collect();
                assert!(pruned.iter().all(|t| t.is_valid(&q)));
                if let Ok(all) = enumerate_types_unpruned(&q, 1 << 20) {
                    let filtered = all.filter(|t| t.is_valid(&q)).count();
                    assert_eq!(filtered, pruned.len(), "{text} {kind}");
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let q = build_q(&parse("x1*x2*x3 + x1 > x2").unwrap(), TransformKind::F1);
        assert!(matches!(enumerate_types(&q, 10), Err(Error::ResourceLimit(_))));
    }
}
