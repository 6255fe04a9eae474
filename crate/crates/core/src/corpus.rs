//! The cross-ratio predicate family, sequence generators and brute-force
//! searches for long homogeneous subsequences.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{self, Rational};
use crate::error::{Error, Result};
use crate::predicate::{for_each_combination, parse, parse_predicate, PredicateAst, PredicateSet};

/// `(z1, z2; z3, z4) = (z1 - z3)(z2 - z4) / ((z2 - z3)(z1 - z4))`.
pub fn cross_ratio(z1: &Rational, z2: &Rational, z3: &Rational, z4: &Rational) -> Result<Rational> {
    let den = (z2 - z3) * (z1 - z4);
    if den.is_zero() {
        return Err(Error::Degenerate(format!(
            "cross ratio ({z1}, {z2}; {z3}, {z4}) has a zero denominator"
        )));
    }
    Ok((z1 - z3) * (z2 - z4) / den)
}

fn cr_parts(a: &str, b: &str, c: &str, d: &str) -> (String, String) {
    (
        format!("(({a} - {c})*({b} - {d}))"),
        format!("(({b} - {c})*({a} - {d}))"),
    )
}

/// `Φ2` over the given five variable names, with both cross-ratio
/// inequalities multiplied through by squared denominators.
fn phi2_text(v: [&str; 5]) -> String {
    let mut distinct = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            distinct.push(format!("{} != {}", v[i], v[j]));
        }
    }
    let (n4, d4) = cr_parts(v[0], v[1], v[2], v[3]);
    let (n5, d5) = cr_parts(v[0], v[1], v[2], v[4]);
    format!(
        "{} and {n4}^2 - 4*{d4}^2 >= 0 and {n5}^2*{d4}^4 - {n4}^4*{d5}^2 >= 0",
        distinct.join(" and ")
    )
}

/// `{Φ1, Φ2, Φ3}`: equality of the first two terms, a doubly growing chain
/// of cross ratios, and the same chain read backwards.
pub fn crossratio_family() -> PredicateSet {
    let forward = phi2_text(["x1", "x2", "x3", "x4", "x5"]);
    let backward = phi2_text(["x5", "x4", "x3", "x2", "x1"]);
    let text = format!("x1 = x2 ; {forward} ; {backward}");
    parse(&text).expect("cross-ratio family parses")
}

pub fn crossratio_phi2() -> PredicateAst {
    parse_predicate(&phi2_text(["x1", "x2", "x3", "x4", "x5"])).expect("Φ2 parses")
}

pub fn monotone_family() -> PredicateSet {
    parse("x1 < x2 ; x1 >= x2").expect("monotone pair parses")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CorpusSpec {
    Crossratio,
    Monotone,
    Arithmetic {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        step: Rational,
        n: usize,
    },
    Geometric {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        ratio: Rational,
        n: usize,
    },
    ShiftedReciprocal {
        #[serde(with = "rational::serde_str")]
        a: Rational,
        #[serde(with = "rational::serde_str")]
        b: Rational,
        n: usize,
    },
    Integers {
        n: usize,
    },
}

impl CorpusSpec {
    /// The predicate set for the two predicate families.
    pub fn predicates(&self) -> Option<PredicateSet> {
        match self {
            CorpusSpec::Crossratio => Some(crossratio_family()),
            CorpusSpec::Monotone => Some(monotone_family()),
            _ => None,
        }
    }
}

pub fn generate(spec: &CorpusSpec) -> Result<Vec<Rational>> {
    let check = |n: usize| {
        if n == 0 {
            Err(Error::Invalid("sequence length must be at least 1".into()))
        } else {
            Ok(())
        }
    };
    match spec {
        CorpusSpec::Crossratio | CorpusSpec::Monotone => Err(Error::Invalid(
            "this family describes predicates, not a sequence".into(),
        )),
        CorpusSpec::Arithmetic { a, step, n } => {
            check(*n)?;
            Ok((0..*n).map(|i| a + step * rational::int(i as i64)).collect())
        }
        CorpusSpec::Geometric { a, ratio, n } => {
            check(*n)?;
            let mut out = vec![a.clone()];
            while out.len() < *n {
                let next = out.last().unwrap() * ratio;
                out.push(next);
            }
            Ok(out)
        }
        CorpusSpec::ShiftedReciprocal { a, b, n } => {
            check(*n)?;
            Ok((1..=*n).map(|i| a + b / rational::int(i as i64)).collect())
        }
        CorpusSpec::Integers { n } => {
            check(*n)?;
            Ok((1..=*n).map(|i| rational::int(i as i64)).collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongestHomogeneous {
    pub length: usize,
    pub indices: Vec<usize>,
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
    /// False when the budget ran out; `length` is then only a lower bound.
    pub exact: bool,
}

/// Longest subsequence on which `phi` holds everywhere, by branch and bound
/// over index sets. `budget` caps the number of tuple evaluations.
pub fn longest_homogeneous_bruteforce(
    seq: &[Rational],
    phi: &PredicateAst,
    budget: u64,
) -> LongestHomogeneous {
    struct Search<'a> {
        seq: &'a [Rational],
        phi: &'a PredicateAst,
        point: Vec<Rational>,
        best: Vec<usize>,
        steps: u64,
        budget: u64,
        exhausted: bool,
    }

    impl Search<'_> {
        fn fits(&mut self, chosen: &[usize], i: usize) -> bool {
            let k = self.phi.arity;
            if chosen.len() + 1 < k {
                return true;
            }
            let mut ok = true;
            let (seq, phi, point) = (self.seq, self.phi, &mut self.point);
            let steps = &mut self.steps;
            point[k - 1] = seq[i].clone();
            for_each_combination(chosen.len(), k - 1, &mut |idx| {
                for (slot, &c) in idx.iter().enumerate() {
                    point[slot] = seq[chosen[c]].clone();
                }
                *steps += 1;
                ok = phi.root.eval(point);
                ok
            });
            ok
        }

        fn dfs(&mut self, chosen: &mut Vec<usize>) {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            let start = chosen.last().map_or(0, |&i| i + 1);
            for i in start..self.seq.len() {
                if chosen.len() + (self.seq.len() - i) <= self.best.len() {
                    return;
                }
                if self.steps >= self.budget {
                    self.exhausted = true;
                    return;
                }
                if self.fits(chosen, i) {
                    chosen.push(i);
                    self.dfs(chosen);
                    chosen.pop();
                }
            }
        }
    }

    let mut s = Search {
        seq,
        phi,
        point: vec![Rational::zero(); phi.arity],
        best: Vec::new(),
        steps: 0,
        budget,
        exhausted: false,
    };
    s.dfs(&mut Vec::new());
    LongestHomogeneous {
        length: s.best.len(),
        values: s.best.iter().map(|&i| seq[i].clone()).collect(),
        indices: s.best,
        exact: !s.exhausted,
    }
}

/// Exact `Φ2` on five integers; agrees with [`crossratio_phi2`] wherever
/// the products fit in `i128`.
pub fn phi2_int(z: [i64; 5]) -> bool {
    for i in 0..5 {
        for j in i + 1..5 {
            if z[i] == z[j] {
                return false;
            }
        }
    }
    let z: [i128; 5] = z.map(i128::from);
    let n4 = (z[0] - z[2]) * (z[1] - z[3]);
    let d4 = (z[1] - z[2]) * (z[0] - z[3]);
    let n5 = (z[0] - z[2]) * (z[1] - z[4]);
    let d5 = (z[1] - z[2]) * (z[0] - z[4]);
    n4 * n4 >= 4 * d4 * d4 && n5 * n5 * d4.pow(4) >= n4.pow(4) * d5 * d5
}

/// `|(c1, c2; c3, c4)| ≥ 2`, each later cross ratio at least the square of
/// the previous one, and `|(c1, c2; c3, cn)| ≥ 2^(2^(n-4))`.
pub fn chain_bound_holds(c: &[Rational]) -> bool {
    if c.len() < 5 {
        return false;
    }
    let cr = |i: usize| cross_ratio(&c[0], &c[1], &c[2], &c[i]).map(|q| rational::abs(&q));
    let Ok(mut prev) = cr(3) else { return false };
    if prev < rational::int(2) {
        return false;
    }
    for i in 4..c.len() {
        let Ok(next) = cr(i) else { return false };
        if next < &prev * &prev {
            return false;
        }
        prev = next;
    }
    let bound = BigInt::one() << (1usize << (c.len() - 4));
    prev >= Rational::from_integer(bound)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub n: i64,
    /// Subsequences of length at least five on which `Φ2` holds everywhere.
    pub subsequences: u64,
    pub longest: Vec<i64>,
    pub violations: Vec<Vec<i64>>,
}

/// Enumerates every subsequence of `1..=n` of length at least five on which
/// `Φ2` holds everywhere and checks the chained cross-ratio bound on each.
pub fn chain_check_integers(n: i64) -> ChainReport {
    fn dfs(n: i64, chosen: &mut Vec<i64>, report: &mut ChainReport) {
        if chosen.len() >= 5 {
            report.subsequences += 1;
            if chosen.len() > report.longest.len() {
                report.longest = chosen.clone();
            }
            let c: Vec<Rational> = chosen.iter().map(|&v| rational::int(v)).collect();
            if !chain_bound_holds(&c) && report.violations.len() < 8 {
                report.violations.push(chosen.clone());
            }
        }
        if chosen.len() == 4 && !phi2_prefix_viable(chosen) {
            return;
        }
        let start = chosen.last().map_or(1, |&v| v + 1);
        for v in start..=n {
            let mut ok = true;
            if chosen.len() >= 4 {
                let mut z = [0i64; 5];
                z[4] = v;
                for_each_combination(chosen.len(), 4, &mut |idx| {
                    for (slot, &i) in idx.iter().enumerate() {
                        z[slot] = chosen[i];
                    }
                    ok = phi2_int(z);
                    ok
                });
            }
            if ok {
                chosen.push(v);
                dfs(n, chosen, report);
                chosen.pop();
            }
        }
    }
    let mut report = ChainReport {
        n,
        ..ChainReport::default()
    };
    dfs(n, &mut Vec::new(), &mut report);
    report
}

/// Any fifth term needs `(c1, c2; c3, c4)^2 ≥ 4` first.
fn phi2_prefix_viable(c: &[i64]) -> bool {
    let c: Vec<i128> = c.iter().map(|&v| i128::from(v)).collect();
    let n4 = (c[0] - c[2]) * (c[1] - c[3]);
    let d4 = (c[1] - c[2]) * (c[0] - c[3]);
    n4 * n4 >= 4 * d4 * d4
}
