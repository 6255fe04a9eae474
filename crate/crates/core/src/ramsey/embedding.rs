//! Growing subsequences embedded into an arbitrary host sequence via
//! `X + Y·x` or `X + Y/x`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ddc::{extract_rfold_scaled, Direction, Scale};
use super::{canonical_sequence, ge_pow, is_r_growing, GrowthParams};
use crate::algebra::rational::{self, Rational};
use crate::algebra::transform::TransformKind;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessOrientation {
    Forward,
    Reversed,
}

/// Host terms at `index_map` equal `f(c_i, A, B)` where `c = b` (forward) or
/// `c = rev(b)` (reversed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub kind: TransformKind,
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    pub orientation: WitnessOrientation,
    pub index_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub b: Vec<Rational>,
    pub witness: EmbeddingWitness,
    /// Which stage produced the result.
    pub stage: &'static str,
}

pub fn verify_embedding(host: &[Rational], b: &[Rational], w: &EmbeddingWitness) -> bool {
    if b.len() != w.index_map.len() {
        return false;
    }
    if w.index_map.windows(2).any(|p| p[0] >= p[1]) {
        return false;
    }
    if w.index_map.last().is_some_and(|&i| i >= host.len()) {
        return false;
    }
    let c: Vec<&Rational> = match w.orientation {
        WitnessOrientation::Forward => b.iter().collect(),
        WitnessOrientation::Reversed => b.iter().rev().collect(),
    };
    c.iter().zip(&w.index_map).all(|(ci, &hi)| {
        match w.kind.apply(ci, &w.a, &w.b) {
            Some(v) => v == host[hi],
            None => false,
        }
    })
}

// Working sequence `work` with `host[pos[i]] = kind(work[i], a, b)`; `pos` is
// increasing unless `reversed`.
#[derive(Clone, Debug)]
struct Track {
    kind: TransformKind,
    a: Rational,
    b: Rational,
    reversed: bool,
    pos: Vec<usize>,
    work: Vec<Rational>,
}

impl Track {
    fn identity(pos: Vec<usize>, work: Vec<Rational>) -> Self {
        Track {
            kind: TransformKind::F1,
            a: Rational::zero(),
            b: Rational::one(),
            reversed: false,
            pos,
            work,
        }
    }

    fn select(&mut self, idx: &[usize]) {
        self.pos = idx.iter().map(|&i| self.pos[i]).collect();
        self.work = idx.iter().map(|&i| self.work[i].clone()).collect();
    }

    fn negate(&mut self) {
        self.work = self.work.iter().map(|v| -v).collect();
        self.b = -&self.b;
    }

    fn mirror(&mut self, scale: Scale) {
        match scale {
            Scale::Additive => {
                self.work = scale.mirror(&self.work);
                self.b = -&self.b;
            }
            Scale::Multiplicative => {
                assert_eq!(self.kind, TransformKind::F1);
                self.work = scale.mirror(&self.work);
                self.kind = TransformKind::F2;
            }
        }
        self.pos.reverse();
        self.reversed = !self.reversed;
    }

    // work_i := work_{i+1} − work_1
    fn shift(&mut self) {
        let s1 = self.work[0].clone();
        self.a = &self.a + &self.b * &s1;
        self.work = self.work[1..].iter().map(|v| v - &s1).collect();
        self.pos.remove(0);
    }

    // work := work / u
    fn rescale(&mut self, u: &Rational) {
        self.work = self.work.iter().map(|v| v / u).collect();
        match self.kind {
            TransformKind::F1 => self.b = &self.b * u,
            TransformKind::F2 => self.b = &self.b / u,
        }
    }

    fn finish(mut self, n: usize, stage: &'static str) -> Embedding {
        self.work.truncate(n);
        self.pos.truncate(n);
        let mut index_map = self.pos;
        index_map.sort_unstable();
        Embedding {
            b: self.work,
            witness: EmbeddingWitness {
                kind: self.kind,
                a: self.a,
                b: self.b,
                orientation: if self.reversed {
                    WitnessOrientation::Reversed
                } else {
                    WitnessOrientation::Forward
                },
                index_map,
            },
            stage,
        }
    }
}

/// Positions of a longest strictly increasing subsequence (patience sorting).
pub fn longest_increasing(seq: &[Rational]) -> Vec<usize> {
    let mut tails: Vec<usize> = Vec::new();
    let mut pred = vec![usize::MAX; seq.len()];
    for i in 0..seq.len() {
        let k = tails.partition_point(|&t| seq[t] < seq[i]);
        if k > 0 {
            pred[i] = tails[k - 1];
        }
        if k == tails.len() {
            tails.push(i);
        } else {
            tails[k] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied().unwrap_or(usize::MAX);
    while cur != usize::MAX {
        out.push(cur);
        cur = pred[cur];
    }
    out.reverse();
    out
}

fn dedup_first(host: &[Rational]) -> Vec<usize> {
    let mut seen: HashMap<&Rational, ()> = HashMap::new();
    let mut out = Vec::new();
    for (i, v) in host.iter().enumerate() {
        if seen.insert(v, ()).is_none() {
            out.push(i);
        }
    }
    out
}

fn constant_branch(host: &[Rational], params: GrowthParams) -> Option<Embedding> {
    let mut groups: HashMap<&Rational, Vec<usize>> = HashMap::new();
    for (i, v) in host.iter().enumerate() {
        groups.entry(v).or_default().push(i);
    }
    let mut best: Option<(&Rational, Vec<usize>)> = None;
    for (v, idx) in groups {
        if idx.len() >= params.n && best.as_ref().is_none_or(|(_, b)| idx[0] < b[0]) {
            best = Some((v, idx));
        }
    }
    let (v, idx) = best?;
    let b = canonical_sequence(params.r, params.n);
    Some(Embedding {
        b,
        witness: EmbeddingWitness {
            kind: TransformKind::F1,
            a: v.clone(),
            b: Rational::zero(),
            orientation: WitnessOrientation::Forward,
            index_map: idx[..params.n].to_vec(),
        },
        stage: "constant",
    })
}

// Anchors two host terms at `b1 = R`, `b2 = R^R`, solves for `(A, B)` and
// extends greedily along the scan order.
fn canonical_fit(host: &[Rational], distinct: &[usize], params: GrowthParams) -> Option<Embedding> {
    const MAX_TERMS: usize = 96;
    let n = params.n;
    if n < 2 || distinct.len() < n {
        return None;
    }
    let scan_len = distinct.len().min(MAX_TERMS);
    let r = params.r_rational();
    let r2 = rational::pow(&r, params.r);
    for reversed in [false, true] {
        let order: Vec<usize> = if reversed {
            distinct.iter().rev().take(scan_len).copied().collect()
        } else {
            distinct.iter().take(scan_len).copied().collect()
        };
        for kind in TransformKind::ALL {
            for i in 0..order.len() {
                if order.len() - i < n {
                    break;
                }
                for j in i + 1..order.len() {
                    let (vi, vj) = (&host[order[i]], &host[order[j]]);
                    let (a, b) = match kind {
                        TransformKind::F1 => {
                            let b = (vj - vi) / (&r2 - &r);
                            (vi - &b * &r, b)
                        }
                        TransformKind::F2 => {
                            let b = (vi - vj) / (r.recip() - r2.recip());
                            (vi - &b / &r, b)
                        }
                    };
                    if b.is_zero() {
                        continue;
                    }
                    let mut pos = vec![order[i], order[j]];
                    let mut work = vec![r.clone(), r2.clone()];
                    for &t in &order[j + 1..] {
                        if work.len() == n {
                            break;
                        }
                        let v = &host[t];
                        let bt = match kind {
                            TransformKind::F1 => (v - &a) / &b,
                            TransformKind::F2 => {
                                if v == &a {
                                    continue;
                                }
                                &b / (v - &a)
                            }
                        };
                        if ge_pow(&bt, work.last().unwrap(), params.r) {
                            work.push(bt);
                            pos.push(t);
                        }
                    }
                    if work.len() >= n {
                        let track = Track {
                            kind,
                            a,
                            b,
                            reversed,
                            pos,
                            work,
                        };
                        return Some(track.finish(n, "canonical-fit"));
                    }
                }
            }
        }
    }
    None
}

// Greedy chain from the first term with `b_1 = R`, rescaling so that the
// first term becomes `R`.
fn normalize_by_first(track: &Track, params: GrowthParams) -> Option<Track> {
    let first = track.work.first()?;
    let r = params.r_rational();
    let scaled: Vec<Rational> = track.work.iter().map(|v| &r * v / first).collect();
    let mut chain = vec![0usize];
    for (i, v) in scaled.iter().enumerate().skip(1) {
        if ge_pow(v, &scaled[*chain.last().unwrap()], params.r) {
            chain.push(i);
        }
    }
    if chain.len() < params.n {
        return None;
    }
    let mut t = track.clone();
    t.select(&chain);
    t.rescale(&(first / &r));
    Some(t)
}

fn general_pipeline(
    host: &[Rational],
    distinct: &[usize],
    params: GrowthParams,
    notes: &mut Vec<String>,
) -> Option<Embedding> {
    let n = params.n;
    let values: Vec<Rational> = distinct.iter().map(|&i| host[i].clone()).collect();
    let mut track = Track::identity(distinct.to_vec(), values.clone());

    let inc = longest_increasing(&values);
    let negated: Vec<Rational> = values.iter().map(|v| -v).collect();
    let dec = longest_increasing(&negated);
    if dec.len() > inc.len() {
        track.select(&dec);
        track.negate();
    } else {
        track.select(&inc);
    }
    notes.push(format!("monotone subsequence of length {}", track.work.len()));

    let mut rfold = None;
    for target in [n + 2, n + 1] {
        if let Ok(e) = extract_rfold_scaled(&track.work, target, params.r, Scale::Additive) {
            rfold = Some(e);
            break;
        }
    }
    let Some(rfold) = rfold else {
        notes.push(format!("no {}-term R-fold subsequence", n + 1));
        return None;
    };
    track.select(&rfold.indices);
    if rfold.direction == Direction::ReverseNegated {
        track.mirror(Scale::Additive);
    }
    track.shift();
    notes.push(format!("shifted sequence of length {}", track.work.len()));

    if let Some(t) = normalize_by_first(&track, params) {
        return Some(t.finish(n, "shift-rescale"));
    }
    match extract_rfold_scaled(&track.work, n + 1, params.r, Scale::Multiplicative) {
        Ok(e) => {
            track.select(&e.indices);
            if e.direction == Direction::ReverseNegated {
                track.mirror(Scale::Multiplicative);
            }
            let u1 = track.work[0].clone();
            track.work.remove(0);
            track.pos.remove(0);
            track.rescale(&u1);
            if is_r_growing(&track.work, params.r) {
                return Some(track.finish(n, "ratio"));
            }
            if let Some(t) = normalize_by_first(&track, params) {
                return Some(t.finish(n, "ratio-rescale"));
            }
            notes.push("ratio sequence is not R-growing".into());
            None
        }
        Err(e) => {
            notes.push(format!("multiplicative pass: {e}"));
            None
        }
    }
}

/// An `R`-growing `b` of length `n` and a witness embedding it into `host`.
type Attempt<'a> = &'a dyn Fn(&mut Vec<String>) -> Option<Embedding>;

/// Every returned result has been verified exactly.
pub fn extract_growing_embedding(host: &[Rational], params: GrowthParams) -> Result<Embedding> {
    let mut notes = Vec::new();
    let distinct = dedup_first(host);
    let attempts: [Attempt<'_>; 3] = [
        &|_| constant_branch(host, params),
        &|_| canonical_fit(host, &distinct, params),
        &|notes| general_pipeline(host, &distinct, params, notes),
    ];
    for attempt in attempts {
        if let Some(e) = attempt(&mut notes) {
            if e.b.len() == params.n
                && is_r_growing(&e.b, params.r)
                && verify_embedding(host, &e.b, &e.witness)
            {
                return Ok(e);
            }
            notes.push(format!("stage {} produced an unverifiable result", e.stage));
        }
    }
    Err(Error::ExtractionFailed(format!(
        "no {}-term {}-growing embedding found in {} terms ({} distinct): {}",
        params.n,
        params.r,
        host.len(),
        distinct.len(),
        notes.join("; ")
    )))
}

/// Integer `R` as a rational; convenience for callers building inputs.
pub fn r_value(r: u32) -> Rational {
    Rational::from_integer(BigInt::from(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn params(r: u32, n: usize) -> GrowthParams {
        GrowthParams::new(r, n).unwrap()
    }

    #[test]
    fn affine_example() {
        let big = Rational::from_integer(num_traits::pow(BigInt::from(256), 4));
        let host = vec![int(5), int(5 + 7 * 4), int(5 + 7 * 256), int(5) + int(7) * &big];
        let e = extract_growing_embedding(&host, params(4, 3)).unwrap();
        assert_eq!(e.witness.kind, TransformKind::F1);
        assert!(is_r_growing(&e.b, 4));
        assert!(verify_embedding(&host, &e.b, &e.witness));
        // The first anchor pair (5, 33) already fits with A = 41/9, B = 1/9.
        assert_eq!(e.b[..2], [int(4), int(256)]);
        assert_eq!(e.witness.index_map, vec![0, 1, 3]);
    }

    #[test]
    fn reciprocal_example() {
        let g = canonical_sequence(4, 3);
        let host: Vec<Rational> = g.iter().map(|x| int(3) + x.recip()).collect();
        let e = extract_growing_embedding(&host, params(4, 3)).unwrap();
        assert_eq!(e.witness.kind, TransformKind::F2);
        assert_eq!((e.witness.a.clone(), e.witness.b.clone()), (int(3), int(1)));
        assert!(verify_embedding(&host, &e.b, &e.witness));
    }

    #[test]
    fn constant_host() {
        let host = vec![int(7); 4];
        let e = extract_growing_embedding(&host, params(4, 4)).unwrap();
        assert!(e.witness.b.is_zero());
        assert_eq!(e.b, canonical_sequence(4, 4));
    }

    #[test]
    fn tampering_is_detected() {
        let host = vec![int(7); 3];
        let e = extract_growing_embedding(&host, params(4, 3)).unwrap();
        let mut w = e.witness.clone();
        w.a = int(8);
        assert!(!verify_embedding(&host, &e.b, &w));
        let zero_b = vec![int(0), int(1), int(2)];
        let w2 = EmbeddingWitness {
            kind: TransformKind::F2,
            ..e.witness
        };
        assert!(!verify_embedding(&host, &zero_b, &w2));
    }

    #[test]
    fn pipeline_on_spread_integers() {
        // 1, 2, 4, …, 2^200 has no canonical anchor but enough spread for
        // the shift/ratio pipeline.
        let host: Vec<Rational> = (0..200).map(|i| int(2).pow(i)).collect();
        let e = extract_growing_embedding(&host, params(3, 3)).unwrap();
        assert!(is_r_growing(&e.b, 3));
        assert!(verify_embedding(&host, &e.b, &e.witness));
    }

    #[test]
    fn short_noise_fails() {
        let host = vec![int(3), int(1), int(4), int(1), int(5)];
        assert!(extract_growing_embedding(&host, params(4, 5)).is_err());
    }

    #[test]
    fn patience_sorting() {
        let s: Vec<Rational> = [3, 1, 4, 1, 5, 9, 2, 6].iter().map(|&x| int(x)).collect();
        let lis = longest_increasing(&s);
        assert_eq!(lis.len(), 4);
        assert!(lis.windows(2).all(|w| s[w[0]] < s[w[1]]));
    }
}
