use proptest::prelude::*;

use esdecide_core::algebra::decomposition::CoefficientDecomposition;
use esdecide_core::algebra::poly::var_names;
use esdecide_core::algebra::rational::{int, ratio, Rational};
use esdecide_core::algebra::span::{binomial, rank, spanning_subset};
use esdecide_core::algebra::transform::{substitute_transform, transformed_vars, TransformKind};
use esdecide_core::decider::{decide_es, DecideOptions};
use esdecide_core::predicate::{parse, parse_predicate, PredicateSet};
use esdecide_core::ramsey::ddc::{extract_ddc, DdcMode};
use esdecide_core::types::{build_q, compute_type, enumerate_types};
use esdecide_core::MultiPoly;

fn poly_strategy(vars: Vec<String>) -> impl Strategy<Value = MultiPoly> {
    let term = (prop::collection::vec(0u32..=2, vars.len()), -9i64..=9);
    prop::collection::vec(term, 1..6).prop_map(move |terms| {
        MultiPoly::from_terms(vars.clone(), terms.into_iter().map(|(m, c)| (m, int(c))))
    })
}

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| ratio(n, d))
}

fn atom_text() -> impl Strategy<Value = String> {
    let rel = prop::sample::select(vec!["<", "<=", "=", "!=", ">=", ">"]);
    (-5i64..=5, -5i64..=5, 0i64..=3, rel).prop_map(|(a, b, c, r)| {
        format!("{a}*x1 + {b}*x2^2 - {c}*x1*x2 {r} {}", a - b)
    })
}

fn predicate_text() -> impl Strategy<Value = String> {
    atom_text().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) and ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) or ({b})")),
            inner.prop_map(|a| format!("not ({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decomposition_reassembles(q in poly_strategy(transformed_vars(2))) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!(CoefficientDecomposition::new(&q).reassemble(), q);
    }

    #[test]
    fn transform_substitution_is_exact(
        p in poly_strategy(var_names("x", 2)),
        ys in prop::collection::vec(rational_strategy(), 2),
        x in rational_strategy(),
        y in rational_strategy(),
    ) {
        prop_assume!(ys.iter().all(|v| *v != int(0)));
        for kind in TransformKind::ALL {
            let (num, den) = substitute_transform(&p, kind);
            let mut point = ys.clone();
            point.push(x.clone());
            point.push(y.clone());
            let xs = kind.apply_all(&ys, &x, &y).unwrap();
            prop_assert_eq!(num.eval(&point) / den.eval(&point), p.eval(&xs));
        }
    }

    #[test]
    fn spanning_subset_keeps_rank(polys in prop::collection::vec(poly_strategy(var_names("t", 2)), 1..7)) {
        let chosen = spanning_subset(&polys);
        let sub: Vec<MultiPoly> = chosen.iter().map(|&i| polys[i].clone()).collect();
        prop_assert_eq!(rank(&sub), rank(&polys));
        let d = polys.iter().map(|p| p.total_degree()).max().unwrap() as u64;
        prop_assert!(chosen.len() as u128 <= binomial(d + 2, 2));
    }

    #[test]
    fn print_parse_round_trip(text in predicate_text()) {
        let ast = parse_predicate(&text).unwrap();
        // Printing drops zero terms, so a variable may vanish from the text.
        let again = parse_predicate(&ast.to_string()).unwrap();
        prop_assert_eq!(again.padded(ast.arity), ast);
    }

    #[test]
    fn negation_flips_truth(
        text in predicate_text(),
        points in prop::collection::vec((rational_strategy(), rational_strategy()), 40),
    ) {
        let phi = parse_predicate(&text).unwrap();
        let neg = phi.negate();
        for (a, b) in points {
            let pt = [a, b];
            let pt = &pt[..phi.arity];
            prop_assert_eq!(neg.eval_at(pt).unwrap(), !phi.eval_at(pt).unwrap());
        }
    }

    #[test]
    fn optimal_ddc_dominates_proof(
        gaps in prop::collection::vec(1i64..=500, 20),
        k in 2usize..=4,
        l in 2usize..=4,
    ) {
        let mut cur = 0;
        let seq: Vec<Rational> = gaps.iter().map(|g| { cur += g; int(cur) }).collect();
        let proof = extract_ddc(&seq, k, l, DdcMode::Proof).unwrap();
        let optimal = extract_ddc(&seq, k, l, DdcMode::Optimal).unwrap();
        prop_assert!(optimal.len() >= proof.len());
    }

    #[test]
    fn computed_types_are_enumerated(a in -5i64..=5, b in 1i64..=5, set_idx in 0usize..3) {
        let texts = ["x1 < x2 ; x1 >= x2", "x1^2 < x2", "x1*x2 > 3"];
        let set = parse(texts[set_idx]).unwrap();
        for kind in TransformKind::ALL {
            let q = build_q(&set, kind);
            let r = (q.entries.iter().map(|e| e.len()).max().unwrap() as u32 + 1).max(3);
            let mut seq = vec![int(1000 * i64::from(r))];
            for _ in 0..2 {
                let next = esdecide_core::algebra::rational::pow(seq.last().unwrap(), r);
                seq.push(next);
            }
            let Ok(t) = compute_type(&q, &int(a), &int(b), &seq, r) else { continue };
            let all: Vec<_> = enumerate_types(&q, 100_000).unwrap().collect();
            prop_assert!(all.iter().all(|u| u.is_valid(&q)));
            prop_assert!(all.contains(&t), "{:?} missing under {}", t, kind);
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let set = parse("x1 < x2 ; x1*x2 >= 1").unwrap();
    for kind in TransformKind::ALL {
        let q = build_q(&set, kind);
        let a: Vec<_> = enumerate_types(&q, 1_000_000).unwrap().collect();
        let b: Vec<_> = enumerate_types(&q, 1_000_000).unwrap().collect();
        assert_eq!(a, b);
    }
}

#[test]
fn verdict_ignores_member_order_and_screening() {
    let naive = DecideOptions {
        naive: true,
        ..DecideOptions::default()
    };
    for (text, swapped) in [
        ("x1 < x2 ; x1 >= x2", "x1 >= x2 ; x1 < x2"),
        ("x1 = x2 ; x1 != x2", "x1 != x2 ; x1 = x2"),
        ("x1 < x2 ; x1 = x2", "x1 = x2 ; x1 < x2"),
    ] {
        let s: PredicateSet = parse(text).unwrap();
        let t: PredicateSet = parse(swapped).unwrap();
        let base = decide_es(&s, &DecideOptions::default()).answer;
        assert_eq!(decide_es(&t, &DecideOptions::default()).answer, base, "{text}");
        assert_eq!(decide_es(&s, &naive).answer, base, "{text} naive");
    }
}
