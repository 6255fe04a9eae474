#![allow(dead_code)]

use esdecide_core::algebra::rational::{int, Rational};

/// Sentences with known truth values.
pub const QE_GOLDEN: [(&str, bool); 25] = [
    ("exists x. x^2 = 2", true),
    ("exists x. x^2 < 0", false),
    ("forall x. x^2 >= 0", true),
    ("forall x. x^2 > 0", false),
    ("forall x. exists y. y > x", true),
    ("exists y. forall x. y > x", false),
    ("forall x. exists y. y^2 = x", false),
    ("forall x. exists y. x < 0 or y^2 = x", true),
    ("exists x. x^3 - 2*x - 5 = 0", true),
    ("exists x. x^4 + x^2 + 1 <= 0", false),
    ("forall x, y. x^2 + y^2 >= 2*x*y", true),
    ("exists x, y. x^2 + y^2 = 1 and x + y = 2", false),
    ("exists x, y. x^2 + y^2 = 1 and 10*x + 10*y = 14", true),
    ("forall x. exists y. x*y = 1", false),
    ("forall x. exists y. x = 0 or x*y = 1", true),
    ("forall a, b. exists x. x^2 + a*x + b = 0", false),
    ("forall a. exists x. x^3 + a*x + 1 = 0", true),
    ("exists x, y. x*y > 1 and x + y < 0 and x > -1", true),
    ("exists x, y. x > 0 and y > 0 and x + y < 2 and x*y > 1", false),
    ("forall x. exists y. forall z. z > y or z < x", true),
    ("exists x. forall y. x*y = 0", true),
    ("forall x, y. exists z. z^2 = x^2 + y^2", true),
    ("forall x. exists y. y^3 = x", true),
    ("exists x, y, z. x^2 + y^2 + z^2 = 1 and x + y + z = 2", false),
    ("forall x. x^4 - 4*x^2 + 5 > 0", true),
];

pub fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

/// Predicate sets with analytically known answers.
pub const DECISION_SETS: [(&str, bool); 5] = [
    ("x1 < x2 ; x1 >= x2", true),
    ("x1 = x2 ; x1 != x2", true),
    ("x1 < x2", false),
    ("x1 >= x2", false),
    ("x1 = x2", false),
];
