//! Recursive-descent parser for the predicate grammar.
//!
//! ```text
//! set    := pred (";" pred)*
//! pred   := conj ("or" conj)*
//! conj   := unary ("and" unary)*
//! unary  := "not" unary | "(" pred ")" | atom
//! atom   := poly rel poly
//! poly   := term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := rational | var ("^" nat)? | "(" poly ")" | "-" factor
//! ```
//!
//! A parenthesis at the start of a `unary` is ambiguous; the parser first
//! tries to read an atom and falls back to a parenthesized predicate.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Formula, PredicateAst, PredicateSet, Relation};
use crate::algebra::poly::MultiPoly;
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Semi,
    Dot,
    Comma,
    Rel(Relation),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Token {
                tok,
                line: tl,
                col: tc,
            });
            *i += width;
            *col += width;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            '^' => push(Tok::Caret, 1, &mut i, &mut col),
            ';' => push(Tok::Semi, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '=' => push(Tok::Rel(Relation::Eq), 1, &mut i, &mut col),
            '!' if chars.get(i + 1) == Some(&'=') => {
                push(Tok::Rel(Relation::Ne), 2, &mut i, &mut col)
            }
            '<' if chars.get(i + 1) == Some(&'=') => {
                push(Tok::Rel(Relation::Le), 2, &mut i, &mut col)
            }
            '>' if chars.get(i + 1) == Some(&'=') => {
                push(Tok::Rel(Relation::Ge), 2, &mut i, &mut col)
            }
            '<' => push(Tok::Rel(Relation::Lt), 1, &mut i, &mut col),
            '>' => push(Tok::Rel(Relation::Gt), 1, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let width = i - start;
                i = start;
                push(Tok::Num(s.parse().unwrap()), width, &mut i, &mut col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let width = i - start;
                i = start;
                push(Tok::Ident(s), width, &mut i, &mut col);
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["and", "or", "not", "forall", "exists"];

/// How identifiers are resolved.
#[derive(Clone, Debug)]
pub enum VarMode {
    /// `x1, x2, …` with indices starting at 1.
    Indexed,
    /// Only the listed names are accepted.
    Named(Vec<String>),
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    mode: VarMode,
    max_index: usize,
}

impl Parser {
    pub fn new(text: &str, mode: VarMode) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            mode,
            max_index: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.col,
            message: message.into(),
        })
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn parse_set(&mut self) -> Result<PredicateSet> {
        let mut members = Vec::new();
        loop {
            self.max_index = 0;
            let root = self.parse_pred()?;
            members.push(PredicateAst::new(root, self.max_index.max(1)));
            match self.peek() {
                Tok::Semi => {
                    self.advance();
                    if self.at_end() {
                        break;
                    }
                }
                Tok::Eof => break,
                _ => return self.error("expected ';', 'and', 'or' or end of input"),
            }
        }
        PredicateSet::new(members)
    }

    pub fn parse_pred(&mut self) -> Result<Formula> {
        let mut items = vec![self.parse_conj()?];
        while self.is_keyword("or") {
            self.advance();
            items.push(self.parse_conj()?);
        }
        Ok(Formula::or(items))
    }

    fn parse_conj(&mut self) -> Result<Formula> {
        let mut items = vec![self.parse_unary()?];
        while self.is_keyword("and") {
            self.advance();
            items.push(self.parse_unary()?);
        }
        Ok(Formula::and(items))
    }

    fn parse_unary(&mut self) -> Result<Formula> {
        if self.is_keyword("not") {
            self.advance();
            return Ok(!self.parse_unary()?);
        }
        if *self.peek() == Tok::LParen {
            let (save, save_max) = (self.pos, self.max_index);
            let atom_err = match self.parse_atom() {
                Ok(a) => return Ok(a),
                Err(e) => (e, self.pos),
            };
            self.pos = save;
            self.max_index = save_max;
            self.advance();
            let inner = self.parse_pred().and_then(|f| {
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            });
            return match inner {
                Ok(f) => Ok(f),
                Err(e) => {
                    if atom_err.1 > self.pos {
                        Err(atom_err.0)
                    } else {
                        Err(e)
                    }
                }
            };
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<Formula> {
        let lhs = self.parse_poly()?;
        let rel = match self.peek() {
            Tok::Rel(r) => *r,
            _ => return self.error("expected a relation (=, !=, <, <=, >, >=)"),
        };
        self.advance();
        let rhs = self.parse_poly()?;
        Ok(Formula::atom(&lhs - &rhs, rel))
    }

    fn parse_poly(&mut self) -> Result<MultiPoly> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.advance();
                    acc = &acc + &self.parse_term()?;
                }
                Tok::Minus => {
                    self.advance();
                    acc = &acc - &self.parse_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.parse_factor()?;
        while *self.peek() == Tok::Star {
            self.advance();
            acc = &acc * &self.parse_factor()?;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<MultiPoly> {
        match self.peek().clone() {
            Tok::Minus => {
                self.advance();
                Ok(-&self.parse_factor()?)
            }
            Tok::Num(n) => {
                self.advance();
                let mut value = Rational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.advance();
                    match self.peek().clone() {
                        Tok::Num(d) if !d.is_zero() => {
                            self.advance();
                            value /= Rational::from_integer(d);
                        }
                        _ => return self.error("expected a positive denominator"),
                    }
                }
                Ok(MultiPoly::constant(Vec::new(), value))
            }
            Tok::LParen => {
                self.advance();
                let p = self.parse_poly()?;
                self.expect(Tok::RParen, "')'")?;
                self.parse_power(p)
            }
            Tok::Ident(name) => {
                let name = self.resolve_var(&name)?;
                self.advance();
                let p = MultiPoly::var(vec![name], 0);
                self.parse_power(p)
            }
            _ => self.error("expected a number, a variable or '('"),
        }
    }

    fn parse_power(&mut self, base: MultiPoly) -> Result<MultiPoly> {
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.advance();
        match self.peek().clone() {
            Tok::Num(e) if !e.is_negative() => match e.to_u32() {
                Some(e) if e <= 1000 => {
                    self.advance();
                    Ok(base.pow(e))
                }
                _ => self.error("exponent too large"),
            },
            _ => self.error("malformed exponent: expected a natural number"),
        }
    }

    fn resolve_var(&mut self, name: &str) -> Result<String> {
        if KEYWORDS.contains(&name) {
            return self.error(format!("unexpected keyword '{name}'"));
        }
        match &self.mode {
            VarMode::Indexed => {
                let idx = name
                    .strip_prefix('x')
                    .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                    .and_then(|d| d.parse::<usize>().ok());
                match idx {
                    Some(i) if i >= 1 => {
                        self.max_index = self.max_index.max(i);
                        Ok(format!("x{i}"))
                    }
                    Some(_) => self.error("variable indices start at 1"),
                    None => self.error(format!("unknown variable '{name}' (expected x1, x2, ...)")),
                }
            }
            VarMode::Named(names) => {
                if names.iter().any(|n| n == name) {
                    Ok(name.to_string())
                } else {
                    self.error(format!("unbound variable '{name}'"))
                }
            }
        }
    }

    /// `(forall|exists) v1 [, v2 …] .` blocks followed by a matrix. Returns
    /// the prefix as `(is_forall, name)` pairs.
    pub fn parse_quantified(&mut self) -> Result<(Vec<(bool, String)>, Formula)> {
        let mut prefix: Vec<(bool, String)> = Vec::new();
        while self.is_keyword("forall") || self.is_keyword("exists") {
            let forall = self.is_keyword("forall");
            self.advance();
            loop {
                match self.peek().clone() {
                    Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                        if prefix.iter().any(|(_, v)| *v == name) {
                            return self.error(format!("variable '{name}' bound twice"));
                        }
                        self.advance();
                        prefix.push((forall, name));
                    }
                    _ => return self.error("expected a variable name"),
                }
                if *self.peek() == Tok::Comma {
                    self.advance();
                    continue;
                }
                break;
            }
            self.expect(Tok::Dot, "'.' after quantified variables")?;
        }
        self.mode = VarMode::Named(prefix.iter().map(|(_, v)| v.clone()).collect());
        let matrix = self.parse_pred()?;
        if !self.at_end() {
            return self.error("unexpected trailing input");
        }
        Ok((prefix, matrix))
    }
}

pub fn parse(text: &str) -> Result<PredicateSet> {
    let mut p = Parser::new(text, VarMode::Indexed)?;
    if p.at_end() {
        return p.error("empty predicate set");
    }
    p.parse_set()
}

/// Parses text containing exactly one predicate.
pub fn parse_predicate(text: &str) -> Result<PredicateAst> {
    let set = parse(text)?;
    if set.len() != 1 {
        return Err(Error::Invalid(format!(
            "expected a single predicate, found {}",
            set.len()
        )));
    }
    Ok(set.members.into_iter().next().unwrap())
}

/// Parses one predicate over the given variable names; polynomials are
/// expressed over exactly `vars`.
pub fn parse_with_vars(text: &str, vars: &[String]) -> Result<Formula> {
    let mut p = Parser::new(text, VarMode::Named(vars.to_vec()))?;
    let f = p.parse_pred()?;
    if !p.at_end() {
        return p.error("unexpected trailing input");
    }
    Ok(f.map_polys(&|q| q.with_vars(vars)))
}
