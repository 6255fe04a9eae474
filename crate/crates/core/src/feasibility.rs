//! Feasibility of candidate types: whether for every `R` and `n` some
//! transform parameters `(A, B)` realize the type on an `R`-growing
//! sequence.
//!
//! The question is reduced to the first-order sentence
//! `∀R ∃L ∀H ∃X ∃Y: L ≥ R ∧ signs ∧ dwarfed ∧ gigantic`, where a dwarfed
//! pair `(α, β)` asks `|q_α| ≤ L·|q_β|` and a gigantic pair asks
//! `|q_α| ≥ H·|q_β|`. The absolute values are resolved by the prescribed
//! signs, so the sentence is a conjunction of polynomial atoms.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::poly::MultiPoly;
use crate::algebra::rational::{self, Rational};
use crate::error::Error;
use crate::predicate::{Formula, Relation};
use crate::qe::{decide_sentence, QeConfig, Quantifier, Sentence};
use crate::types::{type_from_values, CandidateType, CoefficientSystem, Tag};

/// Variables of the feasibility sentence, outermost first.
pub const PSI_VARS: [&str; 5] = ["R", "L", "H", "X", "Y"];

/// `(entry, index in support)`
pub type CoeffRef = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityInstance {
    /// `q_α` over `[X, Y]`, per entry.
    pub coeffs: Vec<Vec<MultiPoly>>,
    pub t: CandidateType,
    pub signs: Vec<(CoeffRef, i8)>,
    /// Pairs `(α, β)` with both signs nonzero and `τ(α, β) = D`.
    pub dwarfed: Vec<(CoeffRef, CoeffRef)>,
    pub gigantic: Vec<(CoeffRef, CoeffRef)>,
}

impl FeasibilityInstance {
    pub fn new(q: &CoefficientSystem, t: &CandidateType) -> Self {
        let coeffs = q.entries.iter().map(|e| e.coeffs.clone()).collect();
        Self::from_coeffs(coeffs, t.clone())
    }

    pub fn from_coeffs(coeffs: Vec<Vec<MultiPoly>>, t: CandidateType) -> Self {
        let mut signs = Vec::new();
        let mut dwarfed = Vec::new();
        let mut gigantic = Vec::new();
        for (e, et) in t.entries.iter().enumerate() {
            let m = et.sigma.len();
            for i in 0..m {
                signs.push(((e, i), et.sigma[i]));
            }
            for i in 0..m {
                for j in 0..m {
                    if i == j || et.sigma[i] == 0 || et.sigma[j] == 0 {
                        continue;
                    }
                    match et.tau[i][j] {
                        Tag::D => dwarfed.push(((e, i), (e, j))),
                        Tag::G => gigantic.push(((e, i), (e, j))),
                    }
                }
            }
        }
        FeasibilityInstance {
            coeffs,
            t,
            signs,
            dwarfed,
            gigantic,
        }
    }

    fn coeff(&self, r: CoeffRef) -> &MultiPoly {
        &self.coeffs[r.0][r.1]
    }

    fn sigma(&self, r: CoeffRef) -> i8 {
        self.t.entries[r.0].sigma[r.1]
    }
}

fn psi_vars() -> Vec<String> {
    PSI_VARS.iter().map(|s| s.to_string()).collect()
}

fn lift(p: &MultiPoly, vars: &[String]) -> MultiPoly {
    p.with_vars(vars)
}

fn signed(p: &MultiPoly, s: i8) -> MultiPoly {
    if s < 0 {
        -p
    } else {
        p.clone()
    }
}

fn push_unique(atoms: &mut Vec<Formula>, f: Formula) {
    if !atoms.contains(&f) {
        atoms.push(f);
    }
}

fn sign_atoms(inst: &FeasibilityInstance, vars: &[String]) -> Vec<Formula> {
    let mut atoms = Vec::new();
    for &(r, s) in &inst.signs {
        let q = lift(inst.coeff(r), vars);
        let rel = match s {
            1 => Relation::Gt,
            -1 => Relation::Lt,
            _ => Relation::Eq,
        };
        push_unique(&mut atoms, Formula::atom(q, rel));
    }
    atoms
}

/// `∀R ∃L ∀H ∃X ∃Y` sentence for the instance.
pub fn build_psi_star(inst: &FeasibilityInstance) -> Sentence {
    let vars = psi_vars();
    let v = |i: usize| MultiPoly::var(vars.clone(), i);
    let (r, l, h) = (v(0), v(1), v(2));
    let mut atoms = vec![Formula::atom(&l - &r, Relation::Ge)];
    atoms.extend(sign_atoms(inst, &vars));
    for &(a, b) in &inst.dwarfed {
        let qa = signed(&lift(inst.coeff(a), &vars), inst.sigma(a));
        let qb = signed(&lift(inst.coeff(b), &vars), inst.sigma(b));
        push_unique(&mut atoms, Formula::atom(&qa - &(&l * &qb), Relation::Le));
    }
    for &(a, b) in &inst.gigantic {
        let qa = signed(&lift(inst.coeff(a), &vars), inst.sigma(a));
        let qb = signed(&lift(inst.coeff(b), &vars), inst.sigma(b));
        push_unique(&mut atoms, Formula::atom(&qa - &(&h * &qb), Relation::Ge));
    }
    let prefix = vec![
        (Quantifier::Forall, "R".to_string()),
        (Quantifier::Exists, "L".to_string()),
        (Quantifier::Forall, "H".to_string()),
        (Quantifier::Exists, "X".to_string()),
        (Quantifier::Exists, "Y".to_string()),
    ];
    Sentence::new(prefix, Formula::and(atoms)).expect("feasibility sentence is closed")
}

/// `∃X ∃Y` with the prescribed signs only; a necessary condition.
pub fn build_sign_sentence(inst: &FeasibilityInstance) -> Sentence {
    let vars: Vec<String> = vec!["X".into(), "Y".into()];
    let atoms = sign_atoms(inst, &vars);
    let matrix = if atoms.is_empty() {
        Formula::atom(MultiPoly::zero(vars.clone()), Relation::Eq)
    } else {
        Formula::and(atoms)
    };
    let prefix = vars.iter().map(|v| (Quantifier::Exists, v.clone())).collect();
    Sentence::new(prefix, matrix).expect("sign sentence is closed")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    Undecided(String),
}

fn decide(s: &Sentence, cfg: &QeConfig) -> Feasibility {
    match decide_sentence(s, cfg) {
        Ok(true) => Feasibility::Feasible,
        Ok(false) => Feasibility::Infeasible,
        Err(Error::ResourceLimit(m)) => Feasibility::Undecided(m),
        Err(e) => Feasibility::Undecided(e.to_string()),
    }
}

pub fn is_feasible(inst: &FeasibilityInstance, cfg: &QeConfig) -> Feasibility {
    decide(&build_psi_star(inst), cfg)
}

/// Whether the sign pattern alone is realizable by some `(X, Y)`.
pub fn signs_realizable(inst: &FeasibilityInstance, cfg: &QeConfig) -> Feasibility {
    decide(&build_sign_sentence(inst), cfg)
}

/// A concrete `(A, B, b)` whose computed type is the instance's type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    #[serde(with = "rational::serde_vec")]
    pub seq: Vec<Rational>,
    pub r: u32,
}

/// `(c, c^R, c^{R²}, …)` of length `n`.
fn scaled_canonical(c: &BigInt, r: u32, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut cur = c.clone();
    for _ in 0..n {
        out.push(Rational::from_integer(cur.clone()));
        cur = num_traits::pow(cur, r as usize);
    }
    out
}

fn magnitudes(seq: &[Rational], r: u32) -> Vec<Rational> {
    let top = rational::pow(seq.last().unwrap(), r);
    let mut out = vec![
        Rational::one(),
        rational::int(2),
        rational::ratio(1, 2),
        rational::int(3),
        top.clone(),
        &top * &top,
        &top * &top * &top,
        top.recip(),
        (&top * &top).recip(),
    ];
    out.dedup();
    out
}

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Grid and random search over `(A, B)` for the exact type on scaled
/// canonical sequences. A returned witness certifies feasibility for this
/// `R` and `n` only.
pub fn witness_search(inst: &FeasibilityInstance, r: u32, n: usize, budget: u64) -> Option<Witness> {
    witness_search_seeded(inst, r, n, budget, DEFAULT_SEED)
}

/// [`witness_search`] with an explicit seed for the random phase.
pub fn witness_search_seeded(
    inst: &FeasibilityInstance,
    r: u32,
    n: usize,
    budget: u64,
    seed: u64,
) -> Option<Witness> {
    assert!(r >= 3, "R must be at least 3");
    let xy: Vec<String> = vec!["X".into(), "Y".into()];
    let coeffs: Vec<Vec<MultiPoly>> = inst
        .coeffs
        .iter()
        .map(|e| e.iter().map(|p| p.with_vars(&xy)).collect())
        .collect();
    let mut tries = 0u64;
    let mut check = |a: &Rational, b: &Rational, seq: &[Rational]| -> Option<bool> {
        if tries >= budget {
            return None;
        }
        tries += 1;
        let pt = [a.clone(), b.clone()];
        let values: Vec<Vec<Rational>> = coeffs
            .iter()
            .map(|e| e.iter().map(|p| p.eval(&pt)).collect())
            .collect();
        Some(matches!(type_from_values(&values, seq, r), Ok(t) if t == inst.t))
    };
    for c in [r, r + 1, 2 * r] {
        let seq = scaled_canonical(&BigInt::from(c), r, n.max(1));
        let mut grid = vec![Rational::zero()];
        for m in magnitudes(&seq, r) {
            grid.push(m.clone());
            grid.push(-m);
        }
        for a in &grid {
            for b in &grid {
                match check(a, b, &seq) {
                    None => return None,
                    Some(true) => {
                        return Some(Witness {
                            a: a.clone(),
                            b: b.clone(),
                            seq,
                            r,
                        })
                    }
                    Some(false) => {}
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq = scaled_canonical(&BigInt::from(r), r, n.max(1));
    let mags = magnitudes(&seq, r);
    loop {
        let pick = |rng: &mut ChaCha8Rng| {
            let m = &mags[rng.gen_range(0..mags.len())];
            let k = rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            m * k
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        match check(&a, &b, &seq) {
            None => return None,
            Some(true) => return Some(Witness { a, b, seq, r }),
            Some(false) => {}
        }
    }
}
