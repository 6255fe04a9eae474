//! Doubling-differences (DDC) and `R`-fold extraction from increasing
//! sequences.
//!
//! Both conditions are checked in their local forms: for an increasing
//! sequence, `b_k − b_i ≥ 2(b_j − b_i)` for all `i < j < k` is equivalent to
//! `b_{j+1} − b_j ≥ b_j − b_1` for every `j`, and
//! `b_k − b_i ≥ R(b_j − b_i)` for all triples is equivalent to
//! `b_{j+1} − b_1 ≥ R(b_j − b_1)`. The worst triple always has `i = 1` and
//! `k = j + 1`.
//!
//! Every routine also has a multiplicative variant operating on positive
//! sequences as if on their logarithms (`b_k·b_1 ≥ b_j²` and
//! `b_k/b_1 ≥ (b_j/b_1)^R`), which keeps all comparisons rational.

use std::collections::HashMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::ge_pow;
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// The subsequence itself satisfies the condition.
    Forward,
    /// `rev(−b)` satisfies it (`rev(1/b)` on the multiplicative scale).
    ReverseNegated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DdcMode {
    /// The midpoint-split recursion; needs the input to be long enough.
    Proof,
    /// Longest qualifying subsequence via dynamic programming.
    Optimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Additive,
    Multiplicative,
}

impl Scale {
    fn doubling_ok(self, first: &Rational, prev: &Rational, last: &Rational) -> bool {
        match self {
            Scale::Additive => last + first >= prev + prev,
            Scale::Multiplicative => last * first >= prev * prev,
        }
    }

    fn rfold_ok(self, first: &Rational, prev: &Rational, last: &Rational, r: u32) -> bool {
        match self {
            Scale::Additive => {
                last - first >= Rational::from_integer(r.into()) * (prev - first)
            }
            Scale::Multiplicative => ge_pow(&(last / first), &(prev / first), r),
        }
    }

    fn left_half(self, x: &Rational, lo: &Rational, hi: &Rational) -> bool {
        match self {
            Scale::Additive => x + x <= lo + hi,
            Scale::Multiplicative => x * x <= lo * hi,
        }
    }

    /// `rev(−b)` or `rev(1/b)`.
    pub fn mirror(self, seq: &[Rational]) -> Vec<Rational> {
        match self {
            Scale::Additive => seq.iter().rev().map(|v| -v).collect(),
            Scale::Multiplicative => seq.iter().rev().map(|v| v.recip()).collect(),
        }
    }
}

/// A subsequence chosen by index together with the normalization under which
/// it satisfies the extracted condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub direction: Direction,
    /// Increasing positions in the input.
    pub indices: Vec<usize>,
    pub values: Vec<Rational>,
}

impl Extraction {
    fn from_indices(direction: Direction, indices: Vec<usize>, seq: &[Rational]) -> Self {
        let values = indices.iter().map(|&i| seq[i].clone()).collect();
        Extraction {
            direction,
            indices,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The values after the stated normalization.
    pub fn oriented(&self, scale: Scale) -> Vec<Rational> {
        match self.direction {
            Direction::Forward => self.values.clone(),
            Direction::ReverseNegated => scale.mirror(&self.values),
        }
    }
}

fn check_increasing(seq: &[Rational]) -> Result<()> {
    match seq.windows(2).position(|w| w[0] >= w[1]) {
        Some(i) => Err(Error::NotIncreasing(i + 1)),
        None => Ok(()),
    }
}

fn check_positive_increasing(seq: &[Rational]) -> Result<()> {
    check_increasing(seq)?;
    if seq.first().is_some_and(|v| !v.is_positive()) {
        return Err(Error::Invalid("multiplicative scale needs positive terms".into()));
    }
    Ok(())
}

fn local_ok<F>(seq: &[Rational], ok: F) -> bool
where
    F: Fn(&Rational, &Rational, &Rational) -> bool,
{
    (1..seq.len().saturating_sub(1)).all(|j| ok(&seq[0], &seq[j], &seq[j + 1]))
}

pub fn ddc_local(seq: &[Rational], scale: Scale) -> bool {
    local_ok(seq, |f, p, l| scale.doubling_ok(f, p, l))
}

pub fn rfold_local(seq: &[Rational], r: u32, scale: Scale) -> bool {
    local_ok(seq, |f, p, l| scale.rfold_ok(f, p, l, r))
}

/// `|b_k − b_i| ≥ 2|b_j − b_i|` over all triples.
pub fn ddc_all_triples(seq: &[Rational]) -> bool {
    let n = seq.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let lhs = (&seq[k] - &seq[i]).abs();
                let rhs = (&seq[j] - &seq[i]).abs();
                if lhs < &rhs + &rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// `x3 − x1 ≥ R(x2 − x1)` over all triples.
pub fn rfold_all_triples(seq: &[Rational], r: u32) -> bool {
    let rr = Rational::from_integer(r.into());
    let n = seq.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if &seq[k] - &seq[i] < &rr * (&seq[j] - &seq[i]) {
                    return false;
                }
            }
        }
    }
    true
}

/// DDC on a strictly increasing sequence.
pub fn check_ddc(seq: &[Rational]) -> Result<bool> {
    check_increasing(seq)?;
    Ok(ddc_local(seq, Scale::Additive))
}

/// Length guaranteed by the recurrence `N(k,ℓ) ≤ N(k−1,ℓ) + N(k,ℓ−1) − 1`
/// with `N(2,·) = N(·,2) = 2`.
pub fn proof_length(k: usize, l: usize) -> u128 {
    fn go(k: usize, l: usize, memo: &mut HashMap<(usize, usize), u128>) -> u128 {
        if k <= 2 || l <= 2 {
            let small = match (k <= 2, l <= 2) {
                (true, true) => k.min(l),
                (true, false) => k,
                _ => l,
            };
            return small as u128;
        }
        if let Some(&v) = memo.get(&(k, l)) {
            return v;
        }
        let v = go(k - 1, l, memo)
            .saturating_add(go(k, l - 1, memo))
            .saturating_sub(1);
        memo.insert((k, l), v);
        v
    }
    go(k, l, &mut HashMap::new())
}

// Midpoint-split recursion over positions `idx` (values increasing). Returns
// `(forward, positions)`.
fn proof_rec(
    seq: &[Rational],
    idx: &[usize],
    k: usize,
    l: usize,
    scale: Scale,
) -> Option<(bool, Vec<usize>)> {
    let ends = |m: usize| -> Vec<usize> {
        match m {
            0 => vec![],
            1 => vec![idx[0]],
            _ => vec![idx[0], idx[idx.len() - 1]],
        }
    };
    if k <= 2 && idx.len() >= k {
        return Some((true, ends(k)));
    }
    if l <= 2 && idx.len() >= l {
        return Some((false, ends(l)));
    }
    if (idx.len() as u128) < proof_length(k, l) {
        return None;
    }
    let lo = &seq[idx[0]];
    let hi = &seq[idx[idx.len() - 1]];
    let split = idx.partition_point(|&i| scale.left_half(&seq[i], lo, hi));
    let (left, right) = idx.split_at(split);
    if (left.len() as u128) >= proof_length(k - 1, l) {
        let (fwd, mut sub) = proof_rec(seq, left, k - 1, l, scale)?;
        if !fwd {
            return Some((false, sub));
        }
        sub.push(idx[idx.len() - 1]);
        Some((true, sub))
    } else {
        let (fwd, sub) = proof_rec(seq, right, k, l - 1, scale)?;
        if fwd {
            return Some((true, sub));
        }
        let mut out = vec![idx[0]];
        out.extend(sub);
        Some((false, out))
    }
}

/// Longest chain `c_1 < c_2 < …` (positions) with `ok(v[c_1], v[c_j], v[c_{j+1}])`
/// for all consecutive pairs. Among equally long chains the one ending
/// latest wins.
fn longest_chain<F>(values: &[Rational], ok: F) -> Vec<usize>
where
    F: Fn(&Rational, &Rational, &Rational) -> bool,
{
    let m = values.len();
    let mut best: Vec<usize> = Vec::new();
    for f in 0..m {
        // len[p], pred[p] for chains starting at f and ending at p
        let mut len = vec![0usize; m];
        let mut pred = vec![usize::MAX; m];
        len[f] = 1;
        for p in f + 1..m {
            len[p] = 2;
            pred[p] = f;
            for q in f + 1..p {
                if len[q] + 1 > len[p] && ok(&values[f], &values[q], &values[p]) {
                    len[p] = len[q] + 1;
                    pred[p] = q;
                }
            }
        }
        let mut end = f;
        for p in f..m {
            if len[p] >= len[end] {
                end = p;
            }
        }
        if len[end] > best.len() {
            let mut chain = vec![end];
            let mut cur = end;
            while pred[cur] != usize::MAX {
                cur = pred[cur];
                chain.push(cur);
            }
            chain.reverse();
            best = chain;
        }
    }
    best
}

fn mirror_indices(indices: &[usize], m: usize) -> Vec<usize> {
    let mut out: Vec<usize> = indices.iter().map(|&i| m - 1 - i).collect();
    out.reverse();
    out
}

pub(crate) fn extract_ddc_scaled(
    seq: &[Rational],
    k: usize,
    l: usize,
    mode: DdcMode,
    scale: Scale,
) -> Result<Extraction> {
    let result = match mode {
        DdcMode::Proof => {
            let need = proof_length(k, l);
            if (seq.len() as u128) < need {
                return Err(Error::ExtractionFailed(format!(
                    "proof mode needs at least {need} terms for k={k}, l={l}, got {}",
                    seq.len()
                )));
            }
            let all: Vec<usize> = (0..seq.len()).collect();
            let (fwd, sub) = proof_rec(seq, &all, k, l, scale)
                .expect("length precondition guarantees success");
            let dir = if fwd {
                Direction::Forward
            } else {
                Direction::ReverseNegated
            };
            Extraction::from_indices(dir, sub, seq)
        }
        DdcMode::Optimal => {
            let fwd = longest_chain(seq, |f, p, q| scale.doubling_ok(f, p, q));
            let mirrored = scale.mirror(seq);
            let rev = longest_chain(&mirrored, |f, p, q| scale.doubling_ok(f, p, q));
            let fwd_ok = fwd.len() >= k;
            let rev_ok = rev.len() >= l;
            if fwd_ok && (!rev_ok || fwd.len() >= rev.len()) {
                Extraction::from_indices(Direction::Forward, fwd, seq)
            } else if rev_ok {
                let idx = mirror_indices(&rev, seq.len());
                Extraction::from_indices(Direction::ReverseNegated, idx, seq)
            } else {
                return Err(Error::ExtractionFailed(format!(
                    "longest doubling subsequences have lengths {} (forward) and {} (reversed)",
                    fwd.len(),
                    rev.len()
                )));
            }
        }
    };
    if !ddc_local(&result.oriented(scale), scale) {
        return Err(Error::ExtractionFailed(
            "extracted subsequence failed the doubling check".into(),
        ));
    }
    Ok(result)
}

/// Subsequence of length `≥ k` satisfying the DDC, or of length `≥ ℓ` whose
/// `rev(−b)` does.
pub fn extract_ddc(seq: &[Rational], k: usize, l: usize, mode: DdcMode) -> Result<Extraction> {
    check_increasing(seq)?;
    extract_ddc_scaled(seq, k, l, mode, Scale::Additive)
}

/// Smallest `r` with `2^r ≥ R`.
pub fn ceil_log2(r: u32) -> u32 {
    let mut e = 0;
    while (1u64 << e) < r as u64 {
        e += 1;
    }
    e
}

pub(crate) fn extract_rfold_scaled(
    seq: &[Rational],
    n: usize,
    r: u32,
    scale: Scale,
) -> Result<Extraction> {
    if seq.len() < n {
        return Err(Error::ExtractionFailed(format!(
            "need {n} terms, got {}",
            seq.len()
        )));
    }
    if n <= 2 {
        let idx: Vec<usize> = match n {
            0 => vec![],
            1 => vec![0],
            _ => vec![0, seq.len() - 1],
        };
        return Ok(Extraction::from_indices(Direction::Forward, idx, seq));
    }
    let stride = ceil_log2(r).max(1) as usize;
    let m = stride * (n - 1) + 1;
    let verify = |e: &Extraction| rfold_local(&e.oriented(scale), r, scale);
    if (seq.len() as u128) >= proof_length(m, m) {
        let base = extract_ddc_scaled(seq, m, m, DdcMode::Proof, scale)?;
        // Striding is done on the normalized sequence, whose first term
        // anchors every difference.
        let picks: Vec<usize> = (0..n).map(|i| stride * i).collect();
        let indices = match base.direction {
            Direction::Forward => picks.iter().map(|&p| base.indices[p]).collect(),
            Direction::ReverseNegated => {
                let mut v: Vec<usize> = picks
                    .iter()
                    .map(|&p| base.indices[base.len() - 1 - p])
                    .collect();
                v.reverse();
                v
            }
        };
        let e = Extraction::from_indices(base.direction, indices, seq);
        if verify(&e) {
            return Ok(e);
        }
    }
    let fwd = longest_chain(seq, |f, p, q| scale.rfold_ok(f, p, q, r));
    let candidate = if fwd.len() >= n {
        Some(Extraction::from_indices(
            Direction::Forward,
            fwd[..n].to_vec(),
            seq,
        ))
    } else {
        let mirrored = scale.mirror(seq);
        let rev = longest_chain(&mirrored, |f, p, q| scale.rfold_ok(f, p, q, r));
        if rev.len() >= n {
            let idx = mirror_indices(&rev[..n], seq.len());
            Some(Extraction::from_indices(Direction::ReverseNegated, idx, seq))
        } else {
            None
        }
    };
    match candidate {
        Some(e) if verify(&e) => Ok(e),
        Some(_) => Err(Error::ExtractionFailed(
            "R-fold candidate failed verification".into(),
        )),
        None => Err(Error::ExtractionFailed(format!(
            "no {n}-term subsequence with {r}-fold expanding differences"
        ))),
    }
}

/// `n`-term subsequence on which `x3 − x1 ≥ R(x2 − x1)` holds everywhere,
/// for the subsequence itself or for `rev(−b)`.
pub fn extract_rfold(seq: &[Rational], n: usize, r: u32) -> Result<Extraction> {
    check_increasing(seq)?;
    extract_rfold_scaled(seq, n, r, Scale::Additive)
}

/// Multiplicative counterpart of [`extract_rfold`] for positive sequences.
pub fn extract_rfold_multiplicative(seq: &[Rational], n: usize, r: u32) -> Result<Extraction> {
    check_positive_increasing(seq)?;
    extract_rfold_scaled(seq, n, r, Scale::Multiplicative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn ddc_examples() {
        assert!(check_ddc(&ints(&[1, 2, 4, 8, 16])).unwrap());
        assert!(!check_ddc(&ints(&[1, 2, 3, 4])).unwrap());
        assert!(check_ddc(&ints(&[1, 2, 3])).unwrap());
        assert_eq!(check_ddc(&ints(&[1, 3, 3])), Err(Error::NotIncreasing(2)));
    }

    #[test]
    fn recurrence_values() {
        assert_eq!(proof_length(2, 7), 2);
        assert_eq!(proof_length(3, 3), 3);
        assert_eq!(proof_length(3, 4), 4);
        assert!(proof_length(3, 3) <= crate::algebra::span::binomial(6, 3));
    }

    #[test]
    fn optimal_prefers_later_end() {
        let e = extract_ddc(&ints(&[1, 2, 3, 4]), 3, 3, DdcMode::Optimal).unwrap();
        assert_eq!(e.direction, Direction::Forward);
        assert_eq!(e.values, ints(&[1, 2, 4]));
    }

    #[test]
    fn proof_mode_on_geometric() {
        let seq: Vec<Rational> = (0..20).map(|i| int(1 << i)).collect();
        let e = extract_ddc(&seq, 3, 3, DdcMode::Proof).unwrap();
        assert!(e.len() == 3);
        assert!(ddc_all_triples(&e.oriented(Scale::Additive)));
    }

    #[test]
    fn pair_is_vacuous() {
        let e = extract_ddc(&ints(&[1, 2]), 2, 2, DdcMode::Optimal).unwrap();
        assert_eq!(e.values, ints(&[1, 2]));
    }

    #[test]
    fn rfold_examples() {
        let geo: Vec<Rational> = (0..9).map(|i| int(16i64.pow(i))).collect();
        let e = extract_rfold(&geo, 3, 16).unwrap();
        assert!(rfold_all_triples(&e.oriented(Scale::Additive), 16));

        let ar: Vec<Rational> = (1..=100).map(int).collect();
        let e = extract_rfold(&ar, 3, 4).unwrap();
        assert_eq!(e.len(), 3);
        assert!(rfold_all_triples(&e.oriented(Scale::Additive), 4));

        let e = extract_rfold(&ints(&[3, 5, 6]), 2, 4).unwrap();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn multiplicative_rfold() {
        let seq: Vec<Rational> = (1..=40).map(|i| int(2).pow(i)).collect();
        let e = extract_rfold_multiplicative(&seq, 3, 3).unwrap();
        let v = e.oriented(Scale::Multiplicative);
        assert!(rfold_local(&v, 3, Scale::Multiplicative));
    }
}
