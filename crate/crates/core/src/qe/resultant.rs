//! Resultants and principal subresultant coefficients of multivariate
//! polynomials, via fraction-free (Bareiss) determinants.

use crate::algebra::poly::MultiPoly;

/// Determinant of a square matrix over `Q[vars]`; exact divisions only.
pub fn det_bareiss(mut m: Vec<Vec<MultiPoly>>, vars: &[String]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(vars.to_vec());
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(vars.to_vec());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(vars.to_vec()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Coefficients of `p` in `var`, leading first.
fn descending(p: &MultiPoly, var: usize) -> Vec<MultiPoly> {
    let mut c = p.coeffs_in(var);
    c.reverse();
    c
}

/// Rows `0..n−j` of the `p` block and `0..m−j` of the `q` block of the
/// Sylvester matrix, restricted to the first `m + n − 2j` columns.
fn sylvester_minor(p: &MultiPoly, q: &MultiPoly, var: usize, j: usize) -> Vec<Vec<MultiPoly>> {
    let (pc, qc) = (descending(p, var), descending(q, var));
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    let size = m + n - 2 * j;
    let zero = MultiPoly::zero(p.vars().to_vec());
    let mut rows = Vec::with_capacity(size);
    for (block, count) in [(&pc, n - j), (&qc, m - j)] {
        for r in 0..count {
            let mut row = vec![zero.clone(); size];
            for (k, c) in block.iter().enumerate() {
                if r + k < size {
                    row[r + k] = c.clone();
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// `res_var(p, q)` as the Sylvester determinant (rows of `p` first).
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: usize) -> MultiPoly {
    let (p, q) = align(p, q);
    assert!(!p.is_zero() && !q.is_zero(), "resultant of a zero polynomial");
    let vars = p.vars().to_vec();
    det_bareiss(sylvester_minor(&p, &q, var, 0), &vars)
}

/// `psc_j(p, q)` for `0 ≤ j < min(deg p, deg q)`; index `j` holds `psc_j`.
pub fn principal_subresultants(p: &MultiPoly, q: &MultiPoly, var: usize) -> Vec<MultiPoly> {
    let (p, q) = align(p, q);
    let vars = p.vars().to_vec();
    let k = p.degree_in(var).min(q.degree_in(var)) as usize;
    (0..k)
        .map(|j| det_bareiss(sylvester_minor(&p, &q, var, j), &vars))
        .collect()
}

fn align(p: &MultiPoly, q: &MultiPoly) -> (MultiPoly, MultiPoly) {
    if p.vars() == q.vars() {
        return (p.clone(), q.clone());
    }
    let mut vars = p.vars().to_vec();
    for v in q.vars() {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    (p.with_vars(&vars), q.with_vars(&vars))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::predicate::parse_with_vars;
    use crate::predicate::Formula;

    fn poly(text: &str, vars: &[&str]) -> MultiPoly {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        match parse_with_vars(&format!("{text} = 0"), &vars).unwrap() {
            Formula::Atom(a) => a.poly,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn substitution_property() {
        let v = ["x", "a", "b"];
        let r = resultant(&poly("x^2 - a", &v), &poly("x - b", &v), 0);
        assert_eq!(r, poly("b^2 - a", &v));
    }

    #[test]
    fn self_resultant_vanishes() {
        let v = ["x", "y"];
        let p = poly("x^2*y + x - 3", &v);
        assert!(resultant(&p, &p, 0).is_zero());
    }

    #[test]
    fn two_by_two() {
        let v = ["x"];
        let r = resultant(&poly("x - 1", &v), &poly("x + 1", &v), 0);
        assert_eq!(r.constant_value(), Some(int(2)));
    }

    #[test]
    fn discriminant_via_psc() {
        let v = ["x", "b", "c"];
        let p = poly("x^2 + b*x + c", &v);
        let d = p.derivative(0);
        let psc = principal_subresultants(&p, &d, 0);
        assert_eq!(psc.len(), 1);
        // res(p, p') = 4c - b^2 for monic quadratics.
        assert_eq!(psc[0], poly("4*c - b^2", &v));
    }

    #[test]
    fn psc_detects_common_factor_degree() {
        let v = ["x"];
        let p = poly("(x - 1)*(x - 2)*(x - 3)", &v);
        let q = poly("(x - 1)*(x - 2)*(x + 5)", &v);
        let psc = principal_subresultants(&p, &q, 0);
        assert!(psc[0].is_zero() && psc[1].is_zero());
        assert!(!psc[2].is_zero());
    }
}
