//! Abstract and concrete syntax of regular expressions with backreferences.
//!
//! The concrete grammar, lowest precedence first:
//!
//! ```text
//! alt     := concat ('|' concat)*
//! concat  := postfix*
//! postfix := atom ('*' | '+' | '{' n '}')*
//! atom    := '(' alt ')' | '\' k | '\{' k '}' | '\' meta | literal
//! ```
//!
//! Capture groups are numbered by the order of their opening parenthesis.
//! A backreference `\k` takes the longest run of decimal digits; the brace
//! form `\{k}` is used whenever the next character is itself a digit.

mod analysis;
mod parse;
mod render;

use std::fmt;
use std::ops::Add;

pub use analysis::{
    c_of, concat_compose, group_count, literals_of, referenced_vars, shift_refs, union_compose,
    validate, wrap_group, Violation,
};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use render::render;

/// Group and backreference index (1-based).
pub type GroupIndex = u32;

/// A parsed expression.
///
/// Group indices are stored explicitly; for a well-formed tree they run
/// `1..=G` in the order in which the groups open in the rendered text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ast {
    Literal(char),
    Epsilon,
    Union(Box<Ast>, Box<Ast>),
    Concat(Vec<Ast>),
    Star(Box<Ast>),
    /// One or more iterations. Kept as its own node so that capture groups
    /// are not duplicated.
    Plus(Box<Ast>),
    /// `child{count}`; the child contains no groups and no backreferences.
    Repeat(Box<Ast>, u32),
    Group(GroupIndex, Box<Ast>),
    Backref(GroupIndex),
}

impl Ast {
    pub fn lit(c: char) -> Ast {
        Ast::Literal(c)
    }

    pub fn union(left: Ast, right: Ast) -> Ast {
        Ast::Union(Box::new(left), Box::new(right))
    }

    pub fn star(child: Ast) -> Ast {
        Ast::Star(Box::new(child))
    }

    pub fn plus(child: Ast) -> Ast {
        Ast::Plus(Box::new(child))
    }

    pub fn repeat(child: Ast, count: u32) -> Ast {
        Ast::Repeat(Box::new(child), count)
    }

    pub fn group(index: GroupIndex, child: Ast) -> Ast {
        Ast::Group(index, Box::new(child))
    }

    /// Concatenation that collapses the trivial cases.
    pub fn concat(mut items: Vec<Ast>) -> Ast {
        match items.len() {
            0 => Ast::Epsilon,
            1 => items.pop().unwrap(),
            _ => Ast::Concat(items),
        }
    }

    /// Literal string as a concatenation of symbols.
    pub fn word(s: &str) -> Ast {
        Ast::concat(s.chars().map(Ast::Literal).collect())
    }

    /// Left-nested union of the given alternatives.
    pub fn alternation(items: impl IntoIterator<Item = Ast>) -> Ast {
        let mut iter = items.into_iter();
        let first = iter.next().unwrap_or(Ast::Epsilon);
        iter.fold(first, Ast::union)
    }

    /// True if the tree contains neither `*` nor `+`.
    pub fn is_star_free(&self) -> bool {
        match self {
            Ast::Star(_) | Ast::Plus(_) => false,
            Ast::Literal(_) | Ast::Epsilon | Ast::Backref(_) => true,
            Ast::Union(l, r) => l.is_star_free() && r.is_star_free(),
            Ast::Concat(items) => items.iter().all(Ast::is_star_free),
            Ast::Repeat(c, _) | Ast::Group(_, c) => c.is_star_free(),
        }
    }

    /// True if the tree contains a group or a backreference.
    pub fn has_captures(&self) -> bool {
        match self {
            Ast::Group(..) | Ast::Backref(_) => true,
            Ast::Literal(_) | Ast::Epsilon => false,
            Ast::Union(l, r) => l.has_captures() || r.has_captures(),
            Ast::Concat(items) => items.iter().any(Ast::has_captures),
            Ast::Star(c) | Ast::Plus(c) | Ast::Repeat(c, _) => c.has_captures(),
        }
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl std::str::FromStr for Ast {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Number of backreference occurrences a single match can use, with `Omega`
/// for references under a star.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Complexity {
    Finite(u64),
    Omega,
}

impl Complexity {
    pub const ZERO: Complexity = Complexity::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Complexity::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Complexity::Finite(n) => Some(n),
            Complexity::Omega => None,
        }
    }

    /// `count` copies added together.
    pub fn times(self, count: u64) -> Complexity {
        match self {
            Complexity::Finite(n) => n
                .checked_mul(count)
                .map_or(Complexity::Omega, Complexity::Finite),
            Complexity::Omega if count == 0 => Complexity::ZERO,
            Complexity::Omega => Complexity::Omega,
        }
    }
}

impl Add for Complexity {
    type Output = Complexity;

    fn add(self, rhs: Complexity) -> Complexity {
        match (self, rhs) {
            (Complexity::Finite(a), Complexity::Finite(b)) => {
                a.checked_add(b).map_or(Complexity::Omega, Complexity::Finite)
            }
            _ => Complexity::Omega,
        }
    }
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Complexity::Finite(n) => write!(f, "{n}"),
            Complexity::Omega => f.write_str("ω"),
        }
    }
}
