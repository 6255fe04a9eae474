//! Well-placed refinement and homogeneous subsequences.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::embedding::{extract_growing_embedding, WitnessOrientation};
use super::{ge_pow, GrowthParams};
use crate::algebra::lex::Orientation;
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};
use crate::predicate::{for_each_combination, PredicateSet};
use crate::types::{build_q, coefficient_values, compute_type, eval_predicates_from_type, CoefficientSystem};

/// Finite `|q_α/q_β|` at `(A, B)` over all entries and ordered pairs.
fn ratio_values(q: &CoefficientSystem, a: &Rational, b: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    for vals in coefficient_values(q, a, b) {
        for (i, vi) in vals.iter().enumerate() {
            for (j, vj) in vals.iter().enumerate() {
                if i != j && !vj.is_zero() {
                    out.push((vi / vj).abs());
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Positions in `b` of a well-placed subsequence for `Q` at `(A, B)`: the
/// longest run of `b` avoiding every ratio value, minus its two ends.
/// Fails with the offending ratio when the result is not well-placed or has
/// fewer than `params.n` terms.
pub fn refine_well_placed(
    b: &[Rational],
    q: &CoefficientSystem,
    a: &Rational,
    bb: &Rational,
    params: GrowthParams,
) -> Result<Vec<usize>> {
    let rhos = ratio_values(q, a, bb);
    if rhos.is_empty() {
        return Ok((0..b.len()).collect());
    }
    // Cell key: number of ratios strictly below, and whether the term hits one.
    let key = |x: &Rational| {
        let below = rhos.partition_point(|r| r < x);
        let hit = rhos.get(below) == Some(x);
        (below, hit)
    };
    let keys: Vec<_> = b.iter().map(key).collect();
    let (mut best_start, mut best_len) = (0, 0);
    let mut start = 0;
    for i in 1..=keys.len() {
        if i == keys.len() || keys[i] != keys[start] || keys[i].1 {
            if !keys[start].1 && i - start > best_len {
                best_start = start;
                best_len = i - start;
            }
            start = i;
        }
    }
    if best_len < 3 {
        return Err(Error::ExtractionFailed(format!(
            "no run of three terms avoids the {} ratio values",
            rhos.len()
        )));
    }
    let idx: Vec<usize> = (best_start + 1..best_start + best_len - 1).collect();
    let first = &b[idx[0]];
    let last = &b[*idx.last().unwrap()];
    let low = first / params.r_rational();
    for rho in &rhos {
        if !(rho <= &low || ge_pow(rho, last, params.r)) {
            return Err(Error::ExtractionFailed(format!(
                "ratio {rho} is neither at most {low} nor at least ({last})^{}",
                params.r
            )));
        }
    }
    if idx.len() < params.n {
        return Err(Error::ExtractionFailed(format!(
            "well-placed run has {} terms, {} requested",
            idx.len(),
            params.n
        )));
    }
    Ok(idx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomogeneousMethod {
    TypePipeline,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneous {
    pub indices: Vec<usize>,
    pub values: Vec<Rational>,
    /// Per member: `true` if it holds everywhere, `false` if nowhere.
    pub truth: Vec<bool>,
    pub method: HomogeneousMethod,
}

/// Truth value of every member if each is constant on all increasing
/// tuples of `seq`.
pub fn homogeneous_truth(set: &PredicateSet, seq: &[Rational]) -> Option<Vec<bool>> {
    set.members
        .iter()
        .map(|m| {
            if m.holds_everywhere(seq) {
                Some(true)
            } else if m.holds_nowhere(seq) {
                Some(false)
            } else {
                None
            }
        })
        .collect()
}

const DFS_BUDGET: u64 = 2_000_000;

fn pick(a: &[Rational], idx: &[usize]) -> Vec<Rational> {
    idx.iter().map(|&i| a[i].clone()).collect()
}

fn type_pipeline(a: &[Rational], set: &PredicateSet, n: usize) -> Option<Vec<usize>> {
    let max_support = |q: &CoefficientSystem| q.entries.iter().map(|e| e.len()).max().unwrap_or(1);
    for kind in crate::algebra::transform::TransformKind::ALL {
        let q = build_q(set, kind);
        let r = (max_support(&q) as u32 + 1).max(3);
        let mut len = a.len();
        while len >= n + 2 {
            let params = GrowthParams { r, n: len };
            len -= 1;
            let Ok(emb) = extract_growing_embedding(a, params) else {
                continue;
            };
            if emb.witness.kind != kind {
                continue;
            }
            let w = &emb.witness;
            let Ok(kept) = refine_well_placed(&emb.b, &q, &w.a, &w.b, GrowthParams { r, n }) else {
                continue;
            };
            let b: Vec<Rational> = kept.iter().map(|&i| emb.b[i].clone()).collect();
            let Ok(t) = compute_type(&q, &w.a, &w.b, &b, r) else {
                continue;
            };
            let orientation = match w.orientation {
                WitnessOrientation::Forward => Orientation::Ascending,
                WitnessOrientation::Reversed => Orientation::Descending,
            };
            if eval_predicates_from_type(set, &q, &t, orientation).is_err() {
                continue;
            }
            let mut host: Vec<usize> = kept.iter().map(|&i| match w.orientation {
                WitnessOrientation::Forward => w.index_map[i],
                WitnessOrientation::Reversed => w.index_map[w.index_map.len() - 1 - i],
            }).collect();
            host.sort_unstable();
            host.truncate(n);
            return Some(host);
        }
    }
    None
}

/// Depth-first search for `n` positions on which every member is constant.
pub fn homogeneous_bruteforce(
    a: &[Rational],
    set: &PredicateSet,
    n: usize,
    budget: u64,
) -> Option<Vec<usize>> {
    struct Search<'a> {
        a: &'a [Rational],
        set: &'a PredicateSet,
        n: usize,
        budget: u64,
        chosen: Vec<usize>,
        truth: Vec<Option<bool>>,
    }

    impl Search<'_> {
        /// Checks the tuples ending at the newest term; returns the members
        /// whose truth value was fixed by this step.
        fn extend_ok(&mut self) -> Option<Vec<usize>> {
            let k = self.set.arity;
            let len = self.chosen.len();
            if k == 0 || len < k {
                return Some(Vec::new());
            }
            let mut fixed = Vec::new();
            let mut point = vec![Rational::zero(); k];
            point[k - 1] = self.a[self.chosen[len - 1]].clone();
            let mut ok = true;
            for_each_combination(len - 1, k - 1, &mut |idx| {
                for (slot, &i) in idx.iter().enumerate() {
                    point[slot] = self.a[self.chosen[i]].clone();
                }
                for (mi, m) in self.set.members.iter().enumerate() {
                    let v = m.root.eval(&point);
                    match self.truth[mi] {
                        None => {
                            self.truth[mi] = Some(v);
                            fixed.push(mi);
                        }
                        Some(t) if t != v => {
                            ok = false;
                            return false;
                        }
                        _ => {}
                    }
                }
                true
            });
            if ok {
                Some(fixed)
            } else {
                for mi in fixed {
                    self.truth[mi] = None;
                }
                None
            }
        }

        fn dfs(&mut self, from: usize) -> bool {
            if self.chosen.len() == self.n {
                return true;
            }
            let need = self.n - self.chosen.len();
            for i in from..self.a.len() {
                if self.a.len() - i < need || self.budget == 0 {
                    return false;
                }
                self.budget -= 1;
                self.chosen.push(i);
                if let Some(fixed) = self.extend_ok() {
                    if self.dfs(i + 1) {
                        return true;
                    }
                    for mi in fixed {
                        self.truth[mi] = None;
                    }
                }
                self.chosen.pop();
            }
            false
        }
    }

    let mut s = Search {
        a,
        set,
        n,
        budget,
        chosen: Vec::new(),
        truth: vec![None; set.members.len()],
    };
    if n > a.len() {
        return None;
    }
    s.dfs(0).then_some(s.chosen)
}

/// An `n`-term subsequence of `a` on which every member of `set` holds
/// everywhere or nowhere, verified by exhaustive evaluation.
pub fn extract_homogeneous(a: &[Rational], set: &PredicateSet, n: usize) -> Result<Homogeneous> {
    let finish = |indices: Vec<usize>, method| {
        let values = pick(a, &indices);
        homogeneous_truth(set, &values).map(|truth| Homogeneous {
            indices,
            values,
            truth,
            method,
        })
    };
    if let Some(h) = type_pipeline(a, set, n).and_then(|i| finish(i, HomogeneousMethod::TypePipeline)) {
        return Ok(h);
    }
    if let Some(h) = homogeneous_bruteforce(a, set, n, DFS_BUDGET)
        .and_then(|i| finish(i, HomogeneousMethod::BruteForce))
    {
        return Ok(h);
    }
    Err(Error::ExtractionFailed(format!(
        "no homogeneous subsequence of length {n} found in {} terms",
        a.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::algebra::transform::TransformKind;
    use crate::predicate::parse;
    use crate::ramsey::canonical_sequence;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn unit_ratios_keep_middle() {
        // x1 - x2 under F1 has coefficients -Y, Y: every ratio is 1.
        let q = build_q(&parse("x1 - x2 > 0").unwrap(), TransformKind::F1);
        let b = canonical_sequence(4, 5);
        let idx = refine_well_placed(&b, &q, &int(0), &int(1), GrowthParams { r: 4, n: 3 }).unwrap();
        assert_eq!(idx, vec![1, 2, 3]);
    }

    #[test]
    fn empty_q_is_unchanged() {
        let q = build_q(&parse("0 = 0").unwrap(), TransformKind::F1);
        let b = canonical_sequence(3, 4);
        let idx = refine_well_placed(&b, &q, &int(0), &int(1), GrowthParams { r: 3, n: 4 }).unwrap();
        assert_eq!(idx, vec![0, 1, 2, 3]);
    }

    #[test]
    fn ratio_splitting_every_gap_fails() {
        // Coefficients X and Y: the only ratios are A/B and B/A.
        let q = build_q(&parse("x1 > 0").unwrap(), TransformKind::F1);
        let b = canonical_sequence(3, 3);
        let a = &b[1] + int(1);
        let err = refine_well_placed(&b, &q, &a, &int(1), GrowthParams { r: 3, n: 2 });
        assert!(err.is_err());
    }

    #[test]
    fn monotone_pair_on_five_terms() {
        let set = parse("x1 < x2 ; x1 >= x2").unwrap();
        for a in [[3, 1, 4, 1, 5], [5, 4, 3, 2, 1], [2, 7, 1, 8, 2]] {
            let h = extract_homogeneous(&ints(&a), &set, 3).unwrap();
            assert_eq!(h.indices.len(), 3);
            assert_eq!(h.truth.len(), 2);
            assert_ne!(h.truth[0], h.truth[1]);
        }
    }

    #[test]
    fn constant_sequence_is_itself() {
        let set = parse("x1 = x2").unwrap();
        let h = extract_homogeneous(&ints(&[7, 7, 7, 7]), &set, 4).unwrap();
        assert_eq!(h.indices, vec![0, 1, 2, 3]);
        assert_eq!(h.truth, vec![true]);
    }

    #[test]
    fn increasing_triple() {
        let set = parse("x1 < x2").unwrap();
        let h = extract_homogeneous(&ints(&[1, 3, 2, 4]), &set, 3).unwrap();
        assert!(h.values == ints(&[1, 3, 4]) || h.values == ints(&[1, 2, 4]));
        assert_eq!(h.truth, vec![true]);
    }

    #[test]
    fn pipeline_on_growing_host() {
        let set = parse("x1 < x2").unwrap();
        let host = canonical_sequence(3, 6);
        let idx = type_pipeline(&host, &set, 3).unwrap();
        assert_eq!(idx.len(), 3);
    }

    #[test]
    fn bruteforce_respects_budget() {
        let set = parse("x1 < x2").unwrap();
        let a = ints(&[5, 4, 3, 2, 1]);
        assert_eq!(homogeneous_bruteforce(&a, &set, 3, 0), None);
        assert!(homogeneous_bruteforce(&a, &set, 3, 100).is_some());
    }
}
