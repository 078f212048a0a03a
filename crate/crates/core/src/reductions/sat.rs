//! 3-CNF satisfiability as matching of a unary star-free expression.

use std::fmt;

use thiserror::Error;

use crate::backtrack::{match_full, match_substring, MatchError};
use crate::syntax::Ast;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, positive: false }
    }

    fn holds(self, assignment: u64) -> bool {
        (assignment >> (self.var - 1) & 1 == 1) == self.positive
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "-{}", self.var)
        }
    }
}

/// A formula with exactly three literals per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Lit; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Dimacs { line: usize, message: String },
    #[error("literal {lit} out of range for {num_vars} variables")]
    LiteralOutOfRange { lit: Lit, num_vars: usize },
    #[error("{0} variables is too many for exhaustive search")]
    TooLarge(usize),
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Lit; 3]>) -> Result<Self, CnfError> {
        for clause in &clauses {
            for &lit in clause {
                if lit.var == 0 || lit.var > num_vars {
                    return Err(CnfError::LiteralOutOfRange { lit, num_vars });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for [a, b, c] in &self.clauses {
            out.push_str(&format!("{a} {b} {c} 0\n"));
        }
        out
    }
}

/// Reads DIMACS CNF. Clauses with one or two literals are padded by
/// repeating their last literal.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let err = |line: usize, message: &str| CnfError::Dimacs {
        line,
        message: message.to_owned(),
    };
    let mut header = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if header.is_some() {
                return Err(err(line_no, "duplicate header"));
            }
            match fields.as_slice() {
                ["p", "cnf", n, m] => {
                    let n = n.parse::<usize>().map_err(|_| err(line_no, "bad variable count"))?;
                    let m = m.parse::<usize>().map_err(|_| err(line_no, "bad clause count"))?;
                    header = Some((n, m));
                }
                _ => return Err(err(line_no, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err(line_no, "clause before header"));
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| err(line_no, "bad literal"))?;
            if value == 0 {
                let clause = match current.as_slice() {
                    [a] => [*a, *a, *a],
                    [a, b] => [*a, *b, *b],
                    [a, b, c] => [*a, *b, *c],
                    [] => return Err(err(line_no, "empty clause")),
                    _ => return Err(err(line_no, "more than 3 literals in clause")),
                };
                clauses.push(clause);
                current.clear();
                continue;
            }
            let var = value.unsigned_abs() as usize;
            if var > n {
                return Err(err(line_no, "variable out of range"));
            }
            current.push(Lit {
                var,
                positive: value > 0,
            });
        }
    }
    let Some((n, m)) = header else {
        return Err(err(last_line.max(1), "missing header"));
    };
    if !current.is_empty() {
        return Err(err(last_line, "unterminated clause"));
    }
    if clauses.len() != m {
        return Err(err(last_line, &format!("header promises {m} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(n, clauses)
}

/// The expression `u_1 … u_n v_1 … v_m` and the subject `0^(n+m)`.
///
/// `u_i = ((0)|(0))` occupies groups `3i-2 .. 3i`; choosing its left inner
/// group sets `x_i` true. Clause `j` becomes group `3n+j` holding one
/// reference per literal, to `3i-1` for `x_i` and to `3i` for `¬x_i`.
pub fn sat3_to_pre(formula: &CnfFormula) -> (Ast, String) {
    let n = formula.num_vars as u32;
    let zero = || Ast::lit('0');
    let mut parts = Vec::new();
    for i in 1..=n {
        parts.push(Ast::group(
            3 * i - 2,
            Ast::union(Ast::group(3 * i - 1, zero()), Ast::group(3 * i, zero())),
        ));
    }
    for (j, clause) in formula.clauses.iter().enumerate() {
        let refs: Vec<Ast> = clause
            .iter()
            .map(|l| Ast::Backref(if l.positive { 3 * l.var as u32 - 1 } else { 3 * l.var as u32 }))
            .collect();
        parts.push(Ast::group(3 * n + j as u32 + 1, Ast::alternation(refs)));
    }
    let subject = "0".repeat(formula.num_vars + formula.clauses.len());
    (Ast::concat(parts), subject)
}

/// Truth-table satisfiability for up to 24 variables.
pub fn brute_sat(formula: &CnfFormula) -> Result<bool, CnfError> {
    if formula.num_vars > 24 {
        return Err(CnfError::TooLarge(formula.num_vars));
    }
    Ok((0..1u64 << formula.num_vars).any(|a| formula.satisfied_by(a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundTrip {
    pub satisfiable: bool,
    pub full_match: bool,
    pub substring_match: bool,
}

impl RoundTrip {
    pub fn agrees(&self) -> bool {
        self.satisfiable == self.full_match && self.full_match == self.substring_match
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundTripError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Match(#[from] MatchError),
}

/// Compares satisfiability with both the membership and the matching
/// question for the reduced instance.
pub fn sat3_roundtrip_check(formula: &CnfFormula) -> Result<RoundTrip, RoundTripError> {
    let satisfiable = brute_sat(formula)?;
    let (ast, subject) = sat3_to_pre(formula);
    Ok(RoundTrip {
        satisfiable,
        full_match: match_full(&ast, &subject)?.matched,
        substring_match: match_substring(&ast, &subject)?.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::render;

    #[test]
    fn reduction_text() {
        let f = CnfFormula::new(2, vec![[Lit::pos(1), Lit::neg(2), Lit::pos(2)]]).unwrap();
        let (ast, s) = sat3_to_pre(&f);
        assert_eq!(render(&ast), r"((0)|(0))((0)|(0))(\2|\6|\5)");
        assert_eq!(s, "000");

        let f = CnfFormula::new(1, vec![[Lit::pos(1); 3], [Lit::neg(1); 3]]).unwrap();
        let (ast, s) = sat3_to_pre(&f);
        assert_eq!(render(&ast), r"((0)|(0))(\2|\2|\2)(\3|\3|\3)");
        assert_eq!(s, "000");
        assert!(!brute_sat(&f).unwrap());
        assert!(!match_full(&ast, &s).unwrap().matched);
    }

    #[test]
    fn roundtrip_examples() {
        let fs = [
            CnfFormula::new(1, vec![[Lit::pos(1); 3]]).unwrap(),
            CnfFormula::new(1, vec![[Lit::pos(1); 3], [Lit::neg(1); 3]]).unwrap(),
            CnfFormula::new(2, vec![[Lit::pos(1), Lit::neg(2), Lit::pos(2)]]).unwrap(),
        ];
        for f in &fs {
            assert!(sat3_roundtrip_check(f).unwrap().agrees());
        }
    }

    #[test]
    fn dimacs() {
        let f = parse_dimacs("c demo\np cnf 3 2\n1 -2 3 0\n-1 0\n").unwrap();
        assert_eq!(f.num_vars, 3);
        assert_eq!(f.clauses[1], [Lit::neg(1); 3]);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0\n"), Err(CnfError::Dimacs { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 1 2\n1 0\n"), Err(CnfError::Dimacs { .. })));
        assert!(matches!(parse_dimacs("1 0\n"), Err(CnfError::Dimacs { line: 1, .. })));
    }

    #[test]
    fn too_large() {
        let f = CnfFormula::new(25, vec![]).unwrap();
        assert_eq!(brute_sat(&f), Err(CnfError::TooLarge(25)));
    }
}
