//! Coefficient systems `Q(Φ, f)` and their sign/magnitude types.
//!
//! After substituting `x_i = f(y_i, X, Y)` into every atom polynomial, each
//! numerator and denominator is split as `Σ_α q_α(X, Y) y^α`. A type records
//! the sign of every `q_α(A, B)` and, for every ordered pair `(α, β)`,
//! whether `|q_α/q_β|` is dwarfed (`D`) or gigantic (`G`) relative to the
//! growing sequence. Given a type, the sign of every atom on every tuple is
//! determined by the dominant term.

mod enumerate;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::decomposition::CoefficientDecomposition;
use crate::algebra::lex::{dominance_cmp, Orientation};
use crate::algebra::poly::{MultiPoly, Monomial};
use crate::algebra::rational::{self, Rational};
use crate::algebra::transform::{substitute_transform, TransformKind};
use crate::predicate::PredicateSet;
use crate::ramsey::ge_pow;

pub use enumerate::{
    count_types, enumerate_sigmas, enumerate_taus, enumerate_types, enumerate_types_unpruned,
    tau_options, Odometer, TypeIter,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    Numerator,
    Denominator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QEntry {
    pub poly: MultiPoly,
    pub decomp: CoefficientDecomposition,
    /// `Λ(q)` in a fixed order; all per-entry vectors are aligned with it.
    pub support: Vec<Monomial>,
    /// `q_α` over `[X, Y]`, aligned with `support`.
    pub coeffs: Vec<MultiPoly>,
    pub denominator: bool,
    pub sources: Vec<(usize, Part)>,
}

impl QEntry {
    fn new(poly: MultiPoly, denominator: bool) -> Self {
        let decomp = CoefficientDecomposition::new(&poly);
        let support = decomp.support();
        let coeffs = support
            .iter()
            .map(|a| decomp.coeff(a).unwrap().clone())
            .collect();
        QEntry {
            poly,
            decomp,
            support,
            coeffs,
            denominator,
            sources: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

/// `Q(Φ, f)` with shared entries for identical polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSystem {
    pub transform: TransformKind,
    pub arity: usize,
    /// Distinct atom polynomials of the predicate set, over `x1..xk`.
    pub atom_polys: Vec<MultiPoly>,
    pub entries: Vec<QEntry>,
    /// `(numerator entry, denominator entry)` per atom polynomial.
    pub atom_entries: Vec<(usize, Option<usize>)>,
}

impl CoefficientSystem {
    fn intern(&mut self, poly: MultiPoly, denominator: bool, source: (usize, Part)) -> usize {
        let idx = match self
            .entries
            .iter()
            .position(|e| e.denominator == denominator && e.poly == poly)
        {
            Some(i) => i,
            None => {
                self.entries.push(QEntry::new(poly, denominator));
                self.entries.len() - 1
            }
        };
        self.entries[idx].sources.push(source);
        idx
    }

    pub fn atom_index(&self, poly: &MultiPoly) -> Option<usize> {
        self.atom_polys.iter().position(|p| p == poly)
    }

    /// Total number of coefficient polynomials `q_α` across entries.
    pub fn coefficient_count(&self) -> usize {
        self.entries.iter().map(|e| e.len()).sum()
    }
}

pub fn build_q(set: &PredicateSet, kind: TransformKind) -> CoefficientSystem {
    let mut sys = CoefficientSystem {
        transform: kind,
        arity: set.arity,
        atom_polys: set.atom_polys(),
        entries: Vec::new(),
        atom_entries: Vec::new(),
    };
    for (atom_id, p) in sys.atom_polys.clone().iter().enumerate() {
        let (num, den) = substitute_transform(p, kind);
        let ni = sys.intern(num, false, (atom_id, Part::Numerator));
        let di = match kind {
            TransformKind::F1 => None,
            TransformKind::F2 => Some(sys.intern(den, true, (atom_id, Part::Denominator))),
        };
        sys.atom_entries.push((ni, di));
    }
    sys
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    /// Dwarfed: `|ρ| ≤ b_1/R`.
    D,
    /// Gigantic: `|ρ| ≥ b_n^R`.
    G,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::D => write!(f, "D"),
            Tag::G => write!(f, "G"),
        }
    }
}

/// `(σ, τ)` for one entry. `tau[i][j]` refers to the ordered pair
/// `(support[i], support[j])`; the diagonal is unused.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EntryType {
    pub sigma: Vec<i8>,
    pub tau: Vec<Vec<Tag>>,
}

impl EntryType {
    pub fn is_valid(&self, forced_positive: bool) -> bool {
        let m = self.sigma.len();
        if forced_positive && self.sigma.iter().any(|&s| s != 1) {
            return false;
        }
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let (si, sj) = (self.sigma[i], self.sigma[j]);
                let (tij, tji) = (self.tau[i][j], self.tau[j][i]);
                if sj == 0 && tij != Tag::G {
                    return false;
                }
                if si == 0 && sj != 0 && tij != Tag::D {
                    return false;
                }
                if si != 0 && sj != 0 && tij == Tag::G && tji == Tag::G {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CandidateType {
    pub entries: Vec<EntryType>,
}

impl CandidateType {
    pub fn is_valid(&self, q: &CoefficientSystem) -> bool {
        self.entries.len() == q.entries.len()
            && self
                .entries
                .iter()
                .zip(&q.entries)
                .all(|(t, e)| t.sigma.len() == e.len() && t.is_valid(e.denominator))
    }

    /// `{entry: {sigma: [...], tau: [[α, β, "D"|"G"], ...]}}` keyed by entry id.
    pub fn to_json(&self, q: &CoefficientSystem) -> Value {
        let mut map = serde_json::Map::new();
        for (id, (t, e)) in self.entries.iter().zip(&q.entries).enumerate() {
            let mut tau = Vec::new();
            for i in 0..t.sigma.len() {
                for j in 0..t.sigma.len() {
                    if i != j {
                        tau.push(json!([e.support[i], e.support[j], t.tau[i][j].to_string()]));
                    }
                }
            }
            map.insert(
                id.to_string(),
                json!({
                    "poly": e.poly.to_string(),
                    "support": e.support,
                    "sigma": t.sigma,
                    "tau": tau,
                }),
            );
        }
        Value::Object(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotWellPlaced {
    pub entry: usize,
    pub alpha: Monomial,
    pub beta: Monomial,
    pub rho: Rational,
}

impl fmt::Display for NotWellPlaced {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ratio {:?}/{:?} of entry {} is {} (neither dwarfed nor gigantic)",
            self.alpha, self.beta, self.entry, self.rho
        )
    }
}

/// Coefficient values `q_α(A, B)` per entry.
pub fn coefficient_values(q: &CoefficientSystem, a: &Rational, b: &Rational) -> Vec<Vec<Rational>> {
    let point = [a.clone(), b.clone()];
    q.entries
        .iter()
        .map(|e| e.coeffs.iter().map(|c| c.eval(&point)).collect())
        .collect()
}

pub fn compute_type(
    q: &CoefficientSystem,
    a: &Rational,
    b: &Rational,
    seq: &[Rational],
    r: u32,
) -> Result<CandidateType, NotWellPlaced> {
    type_from_values(&coefficient_values(q, a, b), seq, r).map_err(|(entry, i, j, rho)| {
        NotWellPlaced {
            entry,
            alpha: q.entries[entry].support[i].clone(),
            beta: q.entries[entry].support[j].clone(),
            rho,
        }
    })
}

/// The type realized by coefficient values on `seq`, or the first ratio
/// `(entry, i, j, |ρ|)` that is neither dwarfed nor gigantic.
pub fn type_from_values(
    values: &[Vec<Rational>],
    seq: &[Rational],
    r: u32,
) -> Result<CandidateType, (usize, usize, usize, Rational)> {
    assert!(!seq.is_empty(), "empty growing sequence");
    let rr = Rational::from_integer(r.into());
    let low = &seq[0] / &rr;
    let last = seq.last().unwrap();
    let mut entries = Vec::with_capacity(values.len());
    for (ei, vals) in values.iter().enumerate() {
        let m = vals.len();
        let sigma: Vec<i8> = vals.iter().map(rational::sign).collect();
        let mut tau = vec![vec![Tag::D; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                if vals[j].is_zero() {
                    tau[i][j] = Tag::G;
                    continue;
                }
                let rho = (&vals[i] / &vals[j]).abs();
                if rho <= low {
                    tau[i][j] = Tag::D;
                } else if ge_pow(&rho, last, r) {
                    tau[i][j] = Tag::G;
                } else {
                    return Err((ei, i, j, rho));
                }
            }
        }
        entries.push(EntryType { sigma, tau });
    }
    Ok(CandidateType { entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InconsistentType {
    pub entry: usize,
}

impl fmt::Display for InconsistentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "entry {} has no dominant coefficient", self.entry)
    }
}

/// Sign of the entry polynomial on every tuple of a sequence of the given
/// type, read off from the dominant term.
pub fn sign_from_type(
    entry: &QEntry,
    t: &EntryType,
    orientation: Orientation,
    entry_id: usize,
) -> Result<i8, InconsistentType> {
    let live: Vec<usize> = (0..t.sigma.len()).filter(|&i| t.sigma[i] != 0).collect();
    if live.is_empty() {
        return Ok(0);
    }
    let beats = |a: usize, b: usize| -> bool {
        match (t.tau[a][b], t.tau[b][a]) {
            (Tag::G, _) => true,
            (Tag::D, Tag::D) => {
                dominance_cmp(&entry.support[a], &entry.support[b], orientation).is_gt()
            }
            (Tag::D, Tag::G) => false,
        }
    };
    let candidate = live
        .iter()
        .copied()
        .find(|&a| live.iter().all(|&b| a == b || beats(a, b)));
    match candidate {
        Some(a) => Ok(t.sigma[a]),
        None => Err(InconsistentType { entry: entry_id }),
    }
}

/// Sign of every atom polynomial (indexed like `q.atom_polys`).
pub fn atom_signs_from_type(
    q: &CoefficientSystem,
    t: &CandidateType,
    orientation: Orientation,
) -> Result<Vec<i8>, InconsistentType> {
    let mut entry_signs: Vec<Option<i8>> = vec![None; q.entries.len()];
    let mut sign_of = |ei: usize| -> Result<i8, InconsistentType> {
        if let Some(s) = entry_signs[ei] {
            return Ok(s);
        }
        let s = sign_from_type(&q.entries[ei], &t.entries[ei], orientation, ei)?;
        entry_signs[ei] = Some(s);
        Ok(s)
    };
    q.atom_entries
        .iter()
        .map(|&(ni, di)| {
            let s = sign_of(ni)?;
            let d = match di {
                Some(d) => sign_of(d)?,
                None => 1,
            };
            Ok(s * d)
        })
        .collect()
}

/// `true` (everywhere) or `false` (nowhere) per member.
pub fn eval_predicates_from_type(
    set: &PredicateSet,
    q: &CoefficientSystem,
    t: &CandidateType,
    orientation: Orientation,
) -> Result<Vec<bool>, InconsistentType> {
    let signs = atom_signs_from_type(q, t, orientation)?;
    Ok(set
        .members
        .iter()
        .map(|m| {
            m.root.eval_with(&mut |atom| {
                let idx = q
                    .atom_index(&atom.poly)
                    .expect("atom polynomial registered in Q");
                atom.rel.holds(signs[idx])
            })
        })
        .collect())
}
