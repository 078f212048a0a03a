use std::fmt;

use thiserror::Error;

use super::{Ast, GroupIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    UnbalancedParen,
    DanglingOperator,
    BadEscape,
    BadReference,
    EmptyRepeat,
    GroupsUnderRepeat,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::UnbalancedParen => "unbalanced-paren",
            ParseErrorKind::DanglingOperator => "dangling-operator",
            ParseErrorKind::BadEscape => "bad-escape",
            ParseErrorKind::BadReference => "bad-reference",
            ParseErrorKind::EmptyRepeat => "empty-repeat",
            ParseErrorKind::GroupsUnderRepeat => "groups-under-repeat",
        })
    }
}

/// Syntax error; `position` is a character offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

/// Characters that are literals only when escaped with a backslash.
pub(crate) const ESCAPABLE: &[char] = &['\\', '(', ')', '|', '*', '+', '{', '}', '#'];

/// Parse the canonical text syntax.
///
/// Backreferences are checked only syntactically here (`\0` is rejected);
/// whether a reference is preceded by enough groups is left to
/// [`validate`](super::validate).
pub fn parse(text: &str) -> Result<Ast, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        next_group: 1,
    };
    let ast = p.alternation()?;
    if p.pos < p.chars.len() {
        // alternation() stops early only at a stray ')'.
        return Err(p.error(p.pos, ParseErrorKind::UnbalancedParen));
    }
    Ok(ast)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    next_group: GroupIndex,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    fn alternation(&mut self) -> Result<Ast, ParseError> {
        let mut left = self.concatenation()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let right = self.concatenation()?;
            left = Ast::union(left, right);
        }
        Ok(left)
    }

    fn concatenation(&mut self) -> Result<Ast, ParseError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None | Some('|') | Some(')') => break,
                Some('*' | '+' | '{' | '}') => {
                    return Err(self.error(self.pos, ParseErrorKind::DanglingOperator))
                }
                Some(_) => {
                    let atom = self.atom()?;
                    items.push(self.postfix(atom)?);
                }
            }
        }
        Ok(Ast::concat(items))
    }

    fn postfix(&mut self, mut node: Ast) -> Result<Ast, ParseError> {
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    node = Ast::star(node);
                }
                Some('+') => {
                    self.pos += 1;
                    node = Ast::plus(node);
                }
                Some('{') => {
                    let start = self.pos;
                    self.pos += 1;
                    let count = match self.digits() {
                        Some(n) if n > 0 && self.peek() == Some('}') => n,
                        _ => return Err(self.error(start, ParseErrorKind::EmptyRepeat)),
                    };
                    self.pos += 1;
                    if node.has_captures() {
                        return Err(self.error(start, ParseErrorKind::GroupsUnderRepeat));
                    }
                    node = Ast::repeat(node, count);
                }
                _ => return Ok(node),
            }
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let start = self.pos;
        let c = self.chars[self.pos];
        self.pos += 1;
        match c {
            '(' => {
                let index = self.next_group;
                self.next_group += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(self.error(start, ParseErrorKind::UnbalancedParen));
                }
                self.pos += 1;
                Ok(Ast::group(index, inner))
            }
            '\\' => self.escape(start),
            c => Ok(Ast::Literal(c)),
        }
    }

    fn escape(&mut self, start: usize) -> Result<Ast, ParseError> {
        match self.peek() {
            Some(d) if d.is_ascii_digit() => match self.digits() {
                Some(k) if k > 0 => Ok(Ast::Backref(k)),
                _ => Err(self.error(start, ParseErrorKind::BadReference)),
            },
            Some('{') => {
                // `\{k}` is a reference; any other `\{` is a literal brace.
                let save = self.pos;
                self.pos += 1;
                if matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    let k = self.digits();
                    if self.peek() == Some('}') {
                        self.pos += 1;
                        return match k {
                            Some(k) if k > 0 => Ok(Ast::Backref(k)),
                            _ => Err(self.error(start, ParseErrorKind::BadReference)),
                        };
                    }
                }
                self.pos = save + 1;
                Ok(Ast::Literal('{'))
            }
            Some(c) if ESCAPABLE.contains(&c) => {
                self.pos += 1;
                Ok(Ast::Literal(c))
            }
            _ => Err(self.error(start, ParseErrorKind::BadEscape)),
        }
    }

    /// Greedy run of decimal digits; `None` if empty or out of range.
    fn digits(&mut self) -> Option<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .ok()
    }
}
