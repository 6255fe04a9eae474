//! The Erdős–Szekeres decision procedure and a brute-force harness for
//! order-invariant predicate sets.
//!
//! For each transform and each candidate type, the predicates are first
//! evaluated from the type in both orientations. Only a type on which every
//! member fails everywhere can refute the property, so feasibility (a sign
//! screen, then the full sentence) is decided for those types alone. A
//! feasible refuting type gives `NO`; exhausting all types gives `YES`; an
//! undecided feasibility question without any refutation gives `UNDECIDED`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::lex::Orientation;
use crate::algebra::rational::{self, Rational};
use crate::algebra::transform::TransformKind;
use crate::error::{Error, Result};
use crate::feasibility::{
    build_psi_star, is_feasible, signs_realizable, witness_search_seeded, Feasibility,
    FeasibilityInstance, Witness, DEFAULT_SEED,
};
use crate::predicate::{for_each_combination, PredicateAst, PredicateSet};
use crate::qe::QeConfig;
use crate::types::{
    build_q, count_types, enumerate_sigmas, enumerate_taus, eval_predicates_from_type,
    CandidateType, EntryType,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    /// Maximum number of candidate types per transform.
    pub type_cap: u128,
    pub qe: QeConfig,
    /// Skip the sign screen and decide every refuting type directly.
    pub naive: bool,
    /// Look for a concrete witness behind a `NO`.
    pub witness: bool,
    pub witness_budget: u64,
    pub seed: u64,
    /// Wall-clock limit; running out gives `UNDECIDED`.
    pub time_limit: Option<Duration>,
    /// Set from another thread to stop early with the stats so far.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            type_cap: 2_000_000,
            qe: QeConfig::default(),
            naive: false,
            witness: true,
            witness_budget: 20_000,
            seed: DEFAULT_SEED,
            time_limit: None,
            cancel: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    #[serde(serialize_with = "wide_count", deserialize_with = "parse_wide_count")]
    pub types_total: u128,
    pub types_examined: u64,
    /// Types on which every member fails everywhere in some orientation.
    pub types_refuting: u64,
    pub sign_screened: u64,
    pub types_feasible: u64,
    pub types_inconsistent: u64,
    pub sentences_decided: u64,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformKind>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_json: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub undecided: Vec<String>,
    pub stats: Stats,
    #[serde(skip)]
    pub certificate: Option<(TransformKind, CandidateType, Orientation)>,
}

/// JSON number when it fits in `u64`, otherwise a decimal string.
fn wide_count<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(*v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

fn parse_wide_count<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<u128, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Wide {
        Num(u64),
        Text(String),
    }
    match Wide::deserialize(d)? {
        Wide::Num(x) => Ok(x.into()),
        Wide::Text(t) => t.parse().map_err(serde::de::Error::custom),
    }
}

fn show_count(n: u128) -> String {
    if n == u128::MAX {
        "more than 10^38".to_string()
    } else {
        n.to_string()
    }
}

/// Candidate type counts per transform, for a warning before long runs.
pub fn complexity_note(set: &PredicateSet) -> String {
    let parts: Vec<String> = TransformKind::ALL
        .iter()
        .map(|&k| {
            let q = build_q(set, k);
            format!(
                "{k}: {} entries, {} coefficients, {} candidate types",
                q.entries.len(),
                q.coefficient_count(),
                show_count(count_types(&q))
            )
        })
        .collect();
    parts.join("; ")
}

pub fn decide_es(set: &PredicateSet, opts: &DecideOptions) -> Verdict {
    let start = Instant::now();
    let mut stats = Stats::default();
    let mut undecided = Vec::new();
    let mut cache: HashMap<String, Feasibility> = HashMap::new();
    'kinds: for kind in TransformKind::ALL {
        let q = build_q(set, kind);
        let total = count_types(&q);
        stats.types_total = stats.types_total.saturating_add(total);
        if total > opts.type_cap {
            undecided.push(format!(
                "{kind}: {} candidate types exceed the cap of {}",
                show_count(total),
                opts.type_cap
            ));
            continue;
        }
        for sigmas in enumerate_sigmas(&q) {
            let mut sign_state: Option<Feasibility> = None;
            for taus in enumerate_taus(&sigmas) {
                stats.types_examined += 1;
                if opts.time_limit.is_some_and(|t| start.elapsed() > t) {
                    undecided.push(format!("{kind}: wall-clock limit reached"));
                    break 'kinds;
                }
                if opts.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed)) {
                    undecided.push(format!("{kind}: interrupted"));
                    break 'kinds;
                }
                let t = CandidateType {
                    entries: sigmas
                        .iter()
                        .zip(taus)
                        .map(|(s, tau)| EntryType { sigma: s.clone(), tau })
                        .collect(),
                };
                let mut refuting = Vec::new();
                for o in Orientation::BOTH {
                    match eval_predicates_from_type(set, &q, &t, o) {
                        Ok(v) if v.iter().all(|&b| !b) => refuting.push(o),
                        Ok(_) => {}
                        Err(_) => stats.types_inconsistent += 1,
                    }
                }
                if refuting.is_empty() {
                    continue;
                }
                stats.types_refuting += 1;
                let inst = FeasibilityInstance::new(&q, &t);
                if !opts.naive {
                    let s = sign_state.get_or_insert_with(|| {
                        stats.sentences_decided += 1;
                        signs_realizable(&inst, &opts.qe)
                    });
                    if *s == Feasibility::Infeasible {
                        stats.sign_screened += 1;
                        continue;
                    }
                }
                let key = build_psi_star(&inst).to_string();
                let f = cache
                    .entry(key)
                    .or_insert_with(|| {
                        stats.sentences_decided += 1;
                        is_feasible(&inst, &opts.qe)
                    })
                    .clone();
                match f {
                    Feasibility::Infeasible => {}
                    Feasibility::Undecided(m) => {
                        if undecided.len() < 16 {
                            undecided.push(format!("{kind}: {m}"));
                        }
                    }
                    Feasibility::Feasible => {
                        stats.types_feasible += 1;
                        let o = refuting[0];
                        let witness = if opts.witness {
                            witness_search_seeded(&inst, 4, 4, opts.witness_budget, opts.seed)
                        } else {
                            None
                        };
                        stats.elapsed_ms = start.elapsed().as_millis();
                        return Verdict {
                            answer: Answer::No,
                            transform: Some(kind),
                            type_json: Some(t.to_json(&q)),
                            orientation: Some(o),
                            witness,
                            undecided: Vec::new(),
                            stats,
                            certificate: Some((kind, t, o)),
                        };
                    }
                }
            }
        }
    }
    stats.elapsed_ms = start.elapsed().as_millis();
    Verdict {
        answer: if undecided.is_empty() {
            Answer::Yes
        } else {
            Answer::Undecided
        },
        transform: None,
        type_json: None,
        orientation: None,
        witness: None,
        undecided,
        stats,
        certificate: None,
    }
}

/// Whether `phi` holds on every increasing tuple of some `n`-term
/// subsequence of `seq`.
pub fn has_everywhere_subsequence(phi: &PredicateAst, seq: &[Rational], n: usize) -> bool {
    fn extend(phi: &PredicateAst, seq: &[Rational], n: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == n {
            return true;
        }
        let k = phi.arity;
        let start = chosen.last().map_or(0, |&i| i + 1);
        for i in start..seq.len() {
            if seq.len() - i < n - chosen.len() {
                break;
            }
            let mut ok = true;
            if k > 0 && chosen.len() + 1 >= k {
                let mut point = vec![Rational::default(); k];
                point[k - 1] = seq[i].clone();
                for_each_combination(chosen.len(), k - 1, &mut |idx| {
                    for (slot, &c) in idx.iter().enumerate() {
                        point[slot] = seq[chosen[c]].clone();
                    }
                    ok = phi.root.eval(&point);
                    ok
                });
            }
            if ok {
                chosen.push(i);
                if extend(phi, seq, n, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    n <= seq.len() && extend(phi, seq, n, &mut Vec::new())
}

/// Calls `visit` on every weak ordering of length `len` (as rank vectors
/// using every rank `0..k` for some `k`) until it returns `false`.
pub fn for_each_weak_order<F>(len: usize, visit: &mut F)
where
    F: FnMut(&[usize]) -> bool,
{
    fn rec<F: FnMut(&[usize]) -> bool>(
        len: usize,
        k: usize,
        cur: &mut Vec<usize>,
        used: &mut Vec<usize>,
        visit: &mut F,
    ) -> bool {
        if cur.len() == len {
            return if used.iter().all(|&c| c > 0) { visit(cur) } else { true };
        }
        let missing = used.iter().filter(|&&c| c == 0).count();
        if missing > len - cur.len() {
            return true;
        }
        for r in 0..k {
            cur.push(r);
            used[r] += 1;
            let go = rec(len, k, cur, used, visit);
            used[r] -= 1;
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    for k in 1..=len.max(1) {
        if len == 0 {
            visit(&[]);
            return;
        }
        let mut used = vec![0; k];
        if !rec(len, k, &mut Vec::new(), &mut used, visit) {
            return;
        }
    }
}

/// Checks on random tuples with ties that each member's truth depends only
/// on the relative order of its arguments.
pub fn check_order_invariant(set: &PredicateSet, samples: usize) -> Result<()> {
    let k = set.arity;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..samples {
        let ranks: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=k as i64)).collect();
        let small: Vec<Rational> = ranks.iter().map(|&r| rational::int(r)).collect();
        let offset = rng.gen_range(-50..50);
        let large: Vec<Rational> = ranks
            .iter()
            .map(|&r| rational::int(1000 * r * r + 7 * r + offset))
            .collect();
        for m in &set.members {
            if m.root.eval(&small) != m.root.eval(&large) {
                return Err(Error::Invalid(format!(
                    "member {m} is not order-invariant (ranks {ranks:?})"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum EsValue {
    Exact(usize),
    /// Larger than the given search limit.
    Exceeds(usize),
}

/// Exact `ES(n)` for an order-invariant set: the least `N` such that every
/// weak ordering of length `N` has an `n`-term subsequence on which some
/// member holds everywhere.
pub fn es_bruteforce(set: &PredicateSet, n: usize, n_max: usize) -> Result<EsValue> {
    check_order_invariant(set, 400)?;
    if n_max > 10 {
        return Err(Error::ResourceLimit(format!(
            "weak orderings of length {n_max} are too many to enumerate"
        )));
    }
    for len in n.max(1)..=n_max {
        let mut all_good = true;
        for_each_weak_order(len, &mut |ranks| {
            let seq: Vec<Rational> = ranks.iter().map(|&r| rational::int(r as i64)).collect();
            let good = set
                .members
                .iter()
                .any(|m| has_everywhere_subsequence(m, &seq, n));
            if !good {
                all_good = false;
            }
            good
        });
        if all_good {
            return Ok(EsValue::Exact(len));
        }
    }
    Ok(EsValue::Exceeds(n_max))
}
