//! Cylindrical algebraic decomposition with Collins' projection, and lazy
//! evaluation of prenex sentences over it.

use num_traits::{Signed, Zero};

use super::algebraic::{roots_over, sign_at_point, RealNum};
use super::{Quantifier, QeConfig, Sentence};
use crate::algebra::poly::MultiPoly;
use crate::algebra::rational::{self, Rational};
use crate::error::{Error, Result};
use crate::predicate::Formula;

use super::resultant::principal_subresultants;

/// Projection factors grouped by main variable: `levels[j]` holds the
/// polynomials whose highest variable is `x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub vars: Vec<String>,
    pub levels: Vec<Vec<MultiPoly>>,
}

impl Projection {
    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn normalize(p: &MultiPoly) -> Option<MultiPoly> {
    if p.is_zero() || p.is_constant() {
        return None;
    }
    Some(p.primitive().0)
}

fn reducta(f: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    let mut g = f.clone();
    while g.degree_in(v) >= 1 {
        out.push(g.clone());
        let coeffs = g.coeffs_in(v);
        let lc = coeffs.last().unwrap();
        if lc.is_constant() {
            break;
        }
        g = MultiPoly::from_coeffs_in(g.vars().to_vec(), v, &coeffs[..coeffs.len() - 1]);
    }
    out
}

/// Collins' projection of polynomials with main variable `v`.
pub fn project(a: &[MultiPoly], v: usize) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    let red: Vec<Vec<MultiPoly>> = a.iter().map(|f| reducta(f, v)).collect();
    for rs in &red {
        for g in rs {
            out.push(g.lead_coeff_in(v));
            out.extend(principal_subresultants(g, &g.derivative(v), v));
        }
    }
    for i in 0..red.len() {
        for j in i + 1..red.len() {
            for g in &red[i] {
                for h in &red[j] {
                    out.extend(principal_subresultants(g, h, v));
                }
            }
        }
    }
    out
}

fn insert(levels: &mut [Vec<MultiPoly>], p: &MultiPoly) -> bool {
    let Some(q) = normalize(p) else { return false };
    let lvl = q.main_var().unwrap();
    if levels[lvl].contains(&q) {
        return false;
    }
    levels[lvl].push(q);
    true
}

/// Full projection closure of `polys` over `vars`.
pub fn projection(polys: &[MultiPoly], vars: &[String], cfg: &QeConfig) -> Result<Projection> {
    let n = vars.len();
    let mut levels = vec![Vec::new(); n];
    for p in polys {
        insert(&mut levels, &p.with_vars(vars));
    }
    for v in (1..n).rev() {
        let current = levels[v].clone();
        for p in project(&current, v) {
            if p.total_degree() > cfg.max_degree {
                return Err(Error::ResourceLimit(format!(
                    "projection factor of degree {} exceeds the cap of {}",
                    p.total_degree(),
                    cfg.max_degree
                )));
            }
            insert(&mut levels, &p);
            let count: usize = levels.iter().map(Vec::len).sum();
            if count > cfg.max_projection {
                return Err(Error::ResourceLimit(format!(
                    "projection set exceeds {} polynomials",
                    cfg.max_projection
                )));
            }
        }
    }
    Ok(Projection {
        vars: vars.to_vec(),
        levels,
    })
}

fn below(x: &Rational) -> Rational {
    if x.is_positive() {
        Rational::zero()
    } else {
        Rational::from_integer(rational::floor(x) - 1)
    }
}

fn above(x: &Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else {
        Rational::from_integer(rational::ceil(x) + 1)
    }
}

fn upper(x: &RealNum) -> Rational {
    x.bounds().1
}

fn lower(x: &RealNum) -> Rational {
    x.bounds().0
}

/// Samples of the stack over `point`: sectors and sections interleaved in
/// increasing order, starting and ending with a sector.
pub fn stack_samples(levels: &[MultiPoly], point: &mut [RealNum]) -> Result<Vec<(RealNum, bool)>> {
    let mut roots: Vec<RealNum> = Vec::new();
    for p in levels {
        let Some(rs) = roots_over(p, point)? else { continue };
        for mut r in rs {
            let mut pos = roots.len();
            let mut dup = false;
            for (i, existing) in roots.iter_mut().enumerate() {
                match r.cmp_real(existing) {
                    std::cmp::Ordering::Less => {
                        pos = i;
                        break;
                    }
                    std::cmp::Ordering::Equal => {
                        dup = true;
                        break;
                    }
                    std::cmp::Ordering::Greater => {}
                }
            }
            if !dup {
                roots.insert(pos, r);
            }
        }
    }
    if roots.is_empty() {
        return Ok(vec![(RealNum::Rat(Rational::zero()), false)]);
    }
    let mut out = Vec::with_capacity(2 * roots.len() + 1);
    out.push((RealNum::Rat(below(&lower(&roots[0]))), false));
    for i in 0..roots.len() {
        out.push((roots[i].clone(), true));
        if i + 1 < roots.len() {
            let (left, right) = roots.split_at_mut(i + 1);
            let (a, b) = (&mut left[i], &mut right[0]);
            while upper(a) >= lower(b) {
                a.refine();
                b.refine();
            }
            let s = rational::simplest_between(&upper(a), &lower(b));
            out.push((RealNum::Rat(s), false));
        }
    }
    out.push((RealNum::Rat(above(&upper(roots.last().unwrap()))), false));
    Ok(out)
}

struct AtomTable {
    polys: Vec<MultiPoly>,
    level: Vec<Option<usize>>,
}

impl AtomTable {
    fn new(matrix: &Formula) -> Self {
        let mut polys: Vec<MultiPoly> = Vec::new();
        for a in matrix.atoms() {
            if !polys.contains(&a.poly) {
                polys.push(a.poly.clone());
            }
        }
        let level = polys.iter().map(|p| p.main_var()).collect();
        AtomTable { polys, level }
    }

    fn index(&self, p: &MultiPoly) -> usize {
        self.polys.iter().position(|q| q == p).unwrap()
    }
}

struct Evaluator<'a> {
    sentence: &'a Sentence,
    proj: Projection,
    atoms: AtomTable,
    cells: u64,
    budget: u64,
}

impl Evaluator<'_> {
    fn partial(&self, signs: &[Option<i8>]) -> Option<bool> {
        self.sentence.matrix.eval_partial(&mut |a| {
            signs[self.atoms.index(&a.poly)].map(|s| a.rel.holds(s))
        })
    }

    fn set_signs(&self, level: Option<usize>, point: &mut [RealNum], signs: &mut [Option<i8>]) {
        for (i, p) in self.atoms.polys.iter().enumerate() {
            if self.atoms.level[i] == level {
                signs[i] = Some(match level {
                    None => rational::sign(&p.constant_value().unwrap()),
                    Some(_) => sign_at_point(p, point),
                });
            }
        }
    }

    fn eval(&mut self, point: &mut Vec<RealNum>, signs: &mut Vec<Option<i8>>) -> Result<bool> {
        if let Some(v) = self.partial(signs) {
            return Ok(v);
        }
        let j = point.len();
        let samples = stack_samples(&self.proj.levels[j], point)?;
        self.cells += samples.len() as u64;
        if self.cells > self.budget {
            return Err(Error::ResourceLimit(format!(
                "cell budget of {} exhausted",
                self.budget
            )));
        }
        let forall = self.sentence.quantifiers[j] == Quantifier::Forall;
        // Sectors carry rational samples; try them first.
        let order: Vec<usize> = (0..samples.len())
            .step_by(2)
            .chain((1..samples.len()).step_by(2))
            .collect();
        for i in order {
            point.push(samples[i].0.clone());
            self.set_signs(Some(j), point, signs);
            let r = self.eval(point, signs);
            for (k, lvl) in self.atoms.level.iter().enumerate() {
                if *lvl == Some(j) {
                    signs[k] = None;
                }
            }
            point.pop();
            let r = r?;
            if forall != r {
                return Ok(r);
            }
        }
        Ok(forall)
    }
}

/// Truth value of a sentence and the number of cells visited.
pub fn decide_with_stats(s: &Sentence, cfg: &QeConfig) -> Result<(bool, u64)> {
    if s.vars.len() > cfg.max_vars {
        return Err(Error::ResourceLimit(format!(
            "{} variables exceed the limit of {}",
            s.vars.len(),
            cfg.max_vars
        )));
    }
    let atoms = AtomTable::new(&s.matrix);
    let proj = projection(&atoms.polys, &s.vars, cfg)?;
    let mut ev = Evaluator {
        sentence: s,
        proj,
        atoms,
        cells: 0,
        budget: cfg.cell_budget,
    };
    let mut signs = vec![None; ev.atoms.polys.len()];
    let mut point = Vec::new();
    ev.set_signs(None, &mut point, &mut signs);
    let v = ev.eval(&mut point, &mut signs)?;
    Ok((v, ev.cells))
}

/// One cell of a full decomposition.
#[derive(Clone, Debug)]
pub struct CadCell {
    pub sample: RealNum,
    pub section: bool,
    pub truth: Option<bool>,
    pub children: Vec<CadCell>,
}

/// A complete decomposition: per-level samples, child stacks, and the truth
/// of the (sub)sentence on every cell when a matrix is given.
#[derive(Clone, Debug)]
pub struct CadTree {
    pub projection: Projection,
    pub cells: Vec<CadCell>,
    pub truth: Option<bool>,
}

impl CadTree {
    pub fn cell_count(&self) -> usize {
        fn count(c: &[CadCell]) -> usize {
            c.iter().map(|x| 1 + count(&x.children)).sum()
        }
        count(&self.cells)
    }
}

/// Builds every cell of the decomposition for `polys`; with a sentence the
/// cells are annotated bottom-up with the truth of the quantified suffix.
pub fn build_cad(
    polys: &[MultiPoly],
    vars: &[String],
    sentence: Option<&Sentence>,
    cfg: &QeConfig,
) -> Result<CadTree> {
    let mut all = polys.to_vec();
    if let Some(s) = sentence {
        all.extend(s.matrix.atoms().into_iter().map(|a| a.poly.clone()));
    }
    let proj = projection(&all, vars, cfg)?;
    let mut budget = cfg.cell_budget;
    let mut point = Vec::new();
    let cells = build_level(&proj, sentence, &mut point, &mut budget)?;
    let truth = sentence.map(|s| fold(s, 0, &cells));
    Ok(CadTree {
        projection: proj,
        cells,
        truth,
    })
}

fn fold(s: &Sentence, level: usize, cells: &[CadCell]) -> bool {
    let values = cells.iter().map(|c| c.truth.unwrap());
    match s.quantifiers[level] {
        Quantifier::Forall => values.into_iter().all(|v| v),
        Quantifier::Exists => values.into_iter().any(|v| v),
    }
}

fn build_level(
    proj: &Projection,
    sentence: Option<&Sentence>,
    point: &mut Vec<RealNum>,
    budget: &mut u64,
) -> Result<Vec<CadCell>> {
    let j = point.len();
    let samples = stack_samples(&proj.levels[j], point)?;
    if (samples.len() as u64) > *budget {
        return Err(Error::ResourceLimit("cell budget exhausted".into()));
    }
    *budget -= samples.len() as u64;
    let mut out = Vec::with_capacity(samples.len());
    for (sample, section) in samples {
        point.push(sample);
        let children = if j + 1 < proj.vars.len() {
            build_level(proj, sentence, point, budget)?
        } else {
            Vec::new()
        };
        let truth = sentence.map(|s| {
            if j + 1 == proj.vars.len() {
                s.matrix.eval_with(&mut |a| a.rel.holds(sign_at_point(&a.poly, point)))
            } else {
                fold(s, j + 1, &children)
            }
        });
        let sample = point.pop().unwrap();
        out.push(CadCell {
            sample,
            section,
            truth,
            children,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn cfg() -> QeConfig {
        QeConfig::default()
    }

    fn decide(text: &str) -> bool {
        decide_with_stats(&Sentence::parse(text).unwrap(), &cfg()).unwrap().0
    }

    #[test]
    fn single_variable() {
        assert!(decide("exists x. x^2 - 2 = 0"));
        assert!(decide("forall x. x^2 + 1 > 0"));
        assert!(!decide("exists x. x^2 + 1 <= 0"));
        assert!(decide("exists x. x^3 - x = 0 and x > 0"));
    }

    #[test]
    fn alternation_pair() {
        assert!(decide("forall x. exists y. y > x^2"));
        assert!(!decide("exists y. forall x. y > x^2"));
    }

    #[test]
    fn algebraic_sections() {
        // x = √2 and y = x^2 forces y = 2.
        assert!(decide("exists x, y. x^2 = 2 and x > 0 and y = x^2 and y - 2 = 0"));
        assert!(!decide("exists x, y. x^2 = 2 and y^2 = x and y^4 - 3 = 0"));
        assert!(decide("exists x, y. x^2 = 2 and y^2 = x and y > 1"));
    }

    #[test]
    fn circle_and_line() {
        assert!(decide("exists x, y. x^2 + y^2 = 1 and x = y"));
        assert!(!decide("exists x, y. x^2 + y^2 = 1 and x + y = 2"));
        assert!(decide("forall x. exists y. x^2 + y^2 > 1 or y = 0"));
    }

    #[test]
    fn stack_over_origin() {
        let vars = vec!["x".to_string()];
        let p = MultiPoly::var(vars.clone(), 0);
        let s = stack_samples(&[&(&p * &p) - &MultiPoly::constant(vars, int(4))], &mut [])
            .unwrap();
        let values: Vec<String> = s.iter().map(|(x, _)| x.to_string()).collect();
        assert_eq!(values, ["-3", "-2", "0", "2", "3"]);
    }

    #[test]
    fn full_tree_agrees_with_lazy() {
        for text in [
            "forall x. exists y. y > x^2",
            "exists y. forall x. y > x^2",
            "forall x. exists y. x*y = 1",
            "forall x. exists y. x*y = 1 or x = 0",
        ] {
            let s = Sentence::parse(text).unwrap();
            let tree = build_cad(&[], &s.vars, Some(&s), &cfg()).unwrap();
            assert_eq!(tree.truth, Some(decide(text)), "{text}");
        }
    }
}
