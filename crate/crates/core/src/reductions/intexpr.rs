//! Integer expressions over sets of naturals and their unary encoding.
//!
//! Concrete syntax: `E ::= BINARY | '(' E '+' E ')' | '(' E 'u' E ')'`,
//! binary constants without leading zeroes.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{concat_compose, union_compose, wrap_group, Ast};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IntExpr {
    Const(u64),
    Sum(Box<IntExpr>, Box<IntExpr>),
    Union(Box<IntExpr>, Box<IntExpr>),
}

impl IntExpr {
    pub fn sum(l: IntExpr, r: IntExpr) -> IntExpr {
        IntExpr::Sum(Box::new(l), Box::new(r))
    }

    pub fn union(l: IntExpr, r: IntExpr) -> IntExpr {
        IntExpr::Union(Box::new(l), Box::new(r))
    }

    pub fn depth(&self) -> usize {
        match self {
            IntExpr::Const(_) => 0,
            IntExpr::Sum(l, r) | IntExpr::Union(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntExpr::Const(v) => write!(f, "{v:b}"),
            IntExpr::Sum(l, r) => write!(f, "({l}+{r})"),
            IntExpr::Union(l, r) => write!(f, "({l}u{r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {position}")]
pub struct IntExprParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, message: &str) -> Result<T, IntExprParseError> {
        Err(IntExprParseError {
            position: self.pos,
            message: message.to_owned(),
        })
    }

    fn expr(&mut self) -> Result<IntExpr, IntExprParseError> {
        match self.bytes.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let left = self.expr()?;
                let op = self.bytes.get(self.pos).copied();
                if !matches!(op, Some(b'+' | b'u')) {
                    return self.fail("expected `+` or `u`");
                }
                self.pos += 1;
                let right = self.expr()?;
                if self.bytes.get(self.pos) != Some(&b')') {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(if op == Some(b'+') {
                    IntExpr::sum(left, right)
                } else {
                    IntExpr::union(left, right)
                })
            }
            Some(b'0' | b'1') => {
                let start = self.pos;
                while matches!(self.bytes.get(self.pos), Some(b'0' | b'1')) {
                    self.pos += 1;
                }
                let digits = &self.bytes[start..self.pos];
                if digits.len() > 1 && digits[0] == b'0' {
                    self.pos = start;
                    return self.fail("leading zero in constant");
                }
                if digits.len() > 64 {
                    self.pos = start;
                    return self.fail("constant does not fit in 64 bits");
                }
                let value = digits.iter().fold(0u64, |acc, d| acc << 1 | u64::from(d - b'0'));
                Ok(IntExpr::Const(value))
            }
            Some(_) => self.fail("expected a constant or `(`"),
            None => self.fail("unexpected end of input"),
        }
    }
}

pub fn intexpr_parse(text: &str) -> Result<IntExpr, IntExprParseError> {
    let trimmed = text.trim_end();
    let mut p = Parser {
        bytes: trimmed.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != trimmed.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

/// Largest accepted evaluation bound.
pub const MAX_EVAL_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// Every value of the expression that is at most the bound.
    pub values: BTreeSet<u64>,
    /// Some value above the bound was discarded.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("evaluation bound {0} exceeds {MAX_EVAL_BOUND}")]
pub struct BoundTooLarge(pub u64);

pub fn intexpr_eval(e: &IntExpr, bound: u64) -> Result<Evaluation, BoundTooLarge> {
    if bound > MAX_EVAL_BOUND {
        return Err(BoundTooLarge(bound));
    }
    fn go(e: &IntExpr, bound: u64, truncated: &mut bool) -> BTreeSet<u64> {
        match e {
            IntExpr::Const(v) if *v <= bound => BTreeSet::from([*v]),
            IntExpr::Const(_) => {
                *truncated = true;
                BTreeSet::new()
            }
            IntExpr::Union(l, r) => {
                let mut out = go(l, bound, truncated);
                out.extend(go(r, bound, truncated));
                out
            }
            IntExpr::Sum(l, r) => {
                let (l, r) = (go(l, bound, truncated), go(r, bound, truncated));
                let mut out = BTreeSet::new();
                for &a in &l {
                    for &b in &r {
                        if a + b <= bound {
                            out.insert(a + b);
                        } else {
                            *truncated = true;
                        }
                    }
                }
                out
            }
        }
    }
    let mut truncated = false;
    let values = go(e, bound, &mut truncated);
    Ok(Evaluation { values, truncated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("zero has no doubling encoding; use the empty expression")]
pub struct ZeroLength;

/// Expression of length `O(log n)` whose language is `{0^n}`.
///
/// `enc(1) = 0`; otherwise `enc(n)` wraps `enc(n / 2)` in a new first
/// group, refers back to it, and appends `0` when `n` is odd.
pub fn encode_unary(n: u64) -> Result<Ast, ZeroLength> {
    match n {
        0 => Err(ZeroLength),
        1 => Ok(Ast::lit('0')),
        _ => {
            let half = wrap_group(&encode_unary(n / 2)?);
            let mut items = vec![half, Ast::Backref(1)];
            if n % 2 == 1 {
                items.push(Ast::lit('0'));
            }
            Ok(Ast::Concat(items))
        }
    }
}

/// Unary expression matching `0^v` exactly for the values `v` of `e`.
pub fn intexpr_to_pre(e: &IntExpr) -> Ast {
    match e {
        IntExpr::Const(0) => Ast::Epsilon,
        IntExpr::Const(v) => encode_unary(*v).expect("non-zero"),
        IntExpr::Sum(l, r) => concat_compose(&[intexpr_to_pre(l), intexpr_to_pre(r)]),
        IntExpr::Union(l, r) => union_compose(&[intexpr_to_pre(l), intexpr_to_pre(r)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backtrack::{enumerate_language, match_full};
    use crate::syntax::{parse, render, validate};

    #[test]
    fn parse_and_eval() {
        let e = intexpr_parse("(10+(1u100))").unwrap();
        assert_eq!(
            e,
            IntExpr::sum(IntExpr::Const(2), IntExpr::union(IntExpr::Const(1), IntExpr::Const(4)))
        );
        assert_eq!(e.to_string(), "(10+(1u100))");
        assert_eq!(intexpr_eval(&e, 64).unwrap().values, BTreeSet::from([3, 6]));
        assert_eq!(intexpr_eval(&intexpr_parse("0").unwrap(), 8).unwrap().values, BTreeSet::from([0]));
        assert_eq!(intexpr_eval(&intexpr_parse("(1+1)").unwrap(), 8).unwrap().values, BTreeSet::from([2]));
    }

    #[test]
    fn truncation_flag() {
        let e = intexpr_parse("(1u1000)").unwrap();
        let ev = intexpr_eval(&e, 4).unwrap();
        assert_eq!(ev.values, BTreeSet::from([1]));
        assert!(ev.truncated);
        assert!(intexpr_eval(&e, MAX_EVAL_BOUND + 1).is_err());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(intexpr_parse("01").unwrap_err().position, 0);
        assert_eq!(intexpr_parse("(1+1").unwrap_err().position, 4);
        assert_eq!(intexpr_parse("(1*1)").unwrap_err().position, 2);
        assert_eq!(intexpr_parse("1)").unwrap_err().position, 1);
        assert_eq!(intexpr_parse("").unwrap_err().position, 0);
    }

    #[test]
    fn encodings() {
        assert_eq!(render(&encode_unary(1).unwrap()), "0");
        assert_eq!(render(&encode_unary(2).unwrap()), r"(0)\1");
        assert_eq!(render(&encode_unary(5).unwrap()), r"((0)\2)\{1}0");
        assert_eq!(encode_unary(0), Err(ZeroLength));
        for n in 1..=40u64 {
            let ast = encode_unary(n).unwrap();
            assert_eq!(validate(&ast), Ok(()));
            assert_eq!(parse(&render(&ast)).unwrap(), ast);
            assert_eq!(enumerate_language(&ast, 45).unwrap(), BTreeSet::from(["0".repeat(n as usize)]));
        }
    }

    #[test]
    fn reduction_lengths() {
        let ast = intexpr_to_pre(&intexpr_parse("(10+(1u100))").unwrap());
        let lengths: BTreeSet<usize> = (0..=64)
            .filter(|&v| match_full(&ast, &"0".repeat(v)).unwrap().matched)
            .collect();
        assert_eq!(lengths, BTreeSet::from([3, 6]));
        assert_eq!(render(&intexpr_to_pre(&IntExpr::Const(1))), "0");
        let ast = intexpr_to_pre(&intexpr_parse("(0u1)").unwrap());
        assert_eq!(enumerate_language(&ast, 3).unwrap(), BTreeSet::from([String::new(), "0".into()]));
    }
}
