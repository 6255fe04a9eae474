//! Ramsey-type extraction on real sequences: doubling differences, `R`-fold
//! expansion, growing embeddings and homogeneous subsequences.

pub mod ddc;
pub mod embedding;
pub mod homogeneous;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{self, Rational};
use crate::error::{Error, Result};

pub use ddc::{check_ddc, extract_ddc, extract_rfold, DdcMode, Direction, Extraction};
pub use embedding::{extract_growing_embedding, verify_embedding, EmbeddingWitness};
pub use homogeneous::{extract_homogeneous, refine_well_placed, Homogeneous};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthParams {
    pub r: u32,
    pub n: usize,
}

impl GrowthParams {
    pub fn new(r: u32, n: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::Invalid(format!("R must be at least 3, got {r}")));
        }
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        Ok(GrowthParams { r, n })
    }

    pub fn r_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.r))
    }
}

/// `x ≥ y^r`, with a cheap rejection before the power is formed.
pub fn ge_pow(x: &Rational, y: &Rational, r: u32) -> bool {
    if y.is_positive() && y > &Rational::one() && x < y {
        return false;
    }
    x >= &rational::pow(y, r)
}

/// `b1 ≥ R` and `b_{i+1} ≥ b_i^R` for all `i`.
pub fn is_r_growing(b: &[Rational], r: u32) -> bool {
    match b.first() {
        None => true,
        Some(first) => {
            first >= &Rational::from_integer(BigInt::from(r))
                && b.windows(2).all(|w| ge_pow(&w[1], &w[0], r))
        }
    }
}

/// `R, R^R, R^{R²}, …` of length `n`.
pub fn canonical_sequence(r: u32, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut cur = BigInt::from(r);
    for _ in 0..n {
        out.push(Rational::from_integer(cur.clone()));
        cur = num_traits::pow(cur, r as usize);
    }
    out
}

/// One rational per line (`-3/7`, `42`, `2.5`); `#` starts a comment.
pub fn parse_sequence(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let value = rational::parse(content).map_err(|_| Error::Syntax {
            line: lineno + 1,
            column: 1 + line.len() - line.trim_start().len(),
            message: format!("not a rational number: {content:?}"),
        })?;
        out.push(value);
    }
    Ok(out)
}

pub fn format_sequence(seq: &[Rational]) -> String {
    let mut s = String::new();
    for v in seq {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, ratio};

    #[test]
    fn growth_checks() {
        let b = vec![int(4), int(256), Rational::from_integer(num_traits::pow(BigInt::from(256), 4))];
        assert!(is_r_growing(&b, 4));
        assert!(!is_r_growing(&[int(4), int(255)], 4));
        assert!(is_r_growing(&[int(4)], 4));
        assert!(!is_r_growing(&[int(3)], 4));
        assert_eq!(canonical_sequence(4, 3), b);
    }

    #[test]
    fn sequence_files() {
        let seq = parse_sequence("# header\n1\n-3/7\n2.5  # trailing\n\n").unwrap();
        assert_eq!(seq, vec![int(1), ratio(-3, 7), ratio(5, 2)]);
        match parse_sequence("1\nfoo\n") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse_sequence(&format_sequence(&seq)).unwrap(), seq);
    }
}
