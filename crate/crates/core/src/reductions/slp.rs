//! Straight-line programs: grammars deriving exactly one string.
//!
//! A star-free expression together with a choice for each alternative it
//! meets becomes an SLP with one nonterminal per captured group; references
//! reuse the nonterminal of the group they name.
//!
//! File format, one production per line, the first line defining the start
//! symbol:
//!
//! ```text
//! S -> A A
//! A -> B '0'
//! B -> '0'
//! E ->
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::{Ast, GroupIndex};

/// Expansion limit used when none is given.
pub const DEFAULT_MAX_LEN: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    T(char),
    /// Index of a nonterminal.
    N(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Production {
    Empty,
    Term(char),
    Pair(Sym, Sym),
}

/// Productions only refer to nonterminals with smaller indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    pub names: Vec<String>,
    pub productions: Vec<Production>,
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlpError {
    #[error("expression contains `*` or `+`")]
    NotStarFree,
    #[error("choice byte {value} at position {position} is not 0 or 1")]
    InvalidChoice { position: usize, value: u8 },
    #[error("the chosen derivation refers to group {0}, which is not bound")]
    DeadChoice(GroupIndex),
    #[error("derived length exceeds {limit}")]
    Overflow { limit: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

struct Builder<'a> {
    names: Vec<String>,
    productions: Vec<Production>,
    choice: &'a [u8],
    used: Vec<u8>,
    bindings: HashMap<GroupIndex, Sym>,
    helpers: usize,
}

impl Builder<'_> {
    fn add(&mut self, name: String, p: Production) -> Sym {
        self.names.push(name);
        self.productions.push(p);
        Sym::N(self.productions.len() - 1)
    }

    fn helper(&mut self, p: Production) -> Sym {
        self.helpers += 1;
        let name = format!("X{}", self.helpers);
        self.add(name, p)
    }

    /// Single symbol deriving the concatenation of `body`.
    fn bin(&mut self, body: &[Sym]) -> Sym {
        match body {
            [] => self.helper(Production::Empty),
            [s] => *s,
            _ => {
                let (l, r) = body.split_at(body.len() / 2);
                let p = Production::Pair(self.bin(l), self.bin(r));
                self.helper(p)
            }
        }
    }

    /// Nonterminal named `name` deriving `body`, or an existing one when
    /// the body is a single nonterminal.
    fn define(&mut self, name: String, body: &[Sym]) -> Sym {
        match body {
            [] => self.add(name, Production::Empty),
            [Sym::N(i)] => Sym::N(*i),
            [Sym::T(c)] => self.add(name, Production::Term(*c)),
            _ => {
                let (l, r) = body.split_at(body.len() / 2);
                let p = Production::Pair(self.bin(l), self.bin(r));
                self.add(name, p)
            }
        }
    }

    fn decide(&mut self) -> Result<bool, SlpError> {
        let position = self.used.len();
        let value = self.choice.get(position).copied().unwrap_or(0);
        if value > 1 {
            return Err(SlpError::InvalidChoice { position, value });
        }
        self.used.push(value);
        Ok(value == 1)
    }

    fn derive(&mut self, ast: &Ast, out: &mut Vec<Sym>) -> Result<(), SlpError> {
        match ast {
            Ast::Literal(c) => out.push(Sym::T(*c)),
            Ast::Epsilon => {}
            Ast::Union(l, r) => {
                let branch = if self.decide()? { r } else { l };
                self.derive(branch, out)?;
            }
            Ast::Concat(items) => {
                for item in items {
                    self.derive(item, out)?;
                }
            }
            Ast::Star(_) | Ast::Plus(_) => return Err(SlpError::NotStarFree),
            Ast::Repeat(c, n) => {
                for _ in 0..*n {
                    self.derive(c, out)?;
                }
            }
            Ast::Group(g, c) => {
                self.bindings.remove(g);
                let mut body = Vec::new();
                self.derive(c, &mut body)?;
                let sym = self.define(format!("G{g}"), &body);
                self.bindings.insert(*g, sym);
                out.push(sym);
            }
            Ast::Backref(g) => out.push(*self.bindings.get(g).ok_or(SlpError::DeadChoice(*g))?),
        }
        Ok(())
    }
}

/// The SLP for the derivation of `ast` selected by `choice`, one byte per
/// alternative met in depth-first order (`0` left, `1` right, missing
/// bytes read as `0`). Also returns the choice bytes actually consumed.
pub fn slp_from_choice(ast: &Ast, choice: &[u8]) -> Result<(Slp, Vec<u8>), SlpError> {
    if !ast.is_star_free() {
        return Err(SlpError::NotStarFree);
    }
    let mut b = Builder {
        names: Vec::new(),
        productions: Vec::new(),
        choice,
        used: Vec::new(),
        bindings: HashMap::new(),
        helpers: 0,
    };
    let mut body = Vec::new();
    b.derive(ast, &mut body)?;
    let start = match b.define("S".into(), &body) {
        Sym::N(i) => i,
        Sym::T(_) => unreachable!("define always yields a nonterminal"),
    };
    let mut slp = Slp {
        names: b.names,
        productions: b.productions,
        start,
    };
    slp.prune();
    Ok((slp, b.used))
}

impl Slp {
    fn nonterminals(p: &Production) -> Vec<usize> {
        match p {
            Production::Pair(a, b) => [a, b]
                .into_iter()
                .filter_map(|s| match s {
                    Sym::N(i) => Some(*i),
                    Sym::T(_) => None,
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Drops nonterminals unreachable from the start symbol, keeping order.
    fn prune(&mut self) {
        let mut live = vec![false; self.productions.len()];
        live[self.start] = true;
        for i in (0..self.productions.len()).rev() {
            if live[i] {
                for j in Self::nonterminals(&self.productions[i]) {
                    live[j] = true;
                }
            }
        }
        let mut remap = vec![usize::MAX; live.len()];
        let mut names = Vec::new();
        let mut productions = Vec::new();
        for i in 0..live.len() {
            if !live[i] {
                continue;
            }
            remap[i] = productions.len();
            let fix = |s: Sym| match s {
                Sym::N(j) => Sym::N(remap[j]),
                t => t,
            };
            productions.push(match self.productions[i] {
                Production::Pair(a, b) => Production::Pair(fix(a), fix(b)),
                p => p,
            });
            names.push(self.names[i].clone());
        }
        self.start = remap[self.start];
        self.names = names;
        self.productions = productions;
    }

    fn lengths(&self) -> Result<Vec<u64>, SlpError> {
        let mut len = Vec::with_capacity(self.productions.len());
        let sym_len = |s: Sym, len: &Vec<u64>| match s {
            Sym::T(_) => 1,
            Sym::N(i) => len[i],
        };
        for p in &self.productions {
            let l = match *p {
                Production::Empty => 0,
                Production::Term(_) => 1,
                Production::Pair(a, b) => sym_len(a, &len)
                    .checked_add(sym_len(b, &len))
                    .ok_or(SlpError::Overflow { limit: u64::MAX })?,
            };
            len.push(l);
        }
        Ok(len)
    }
}

/// Length of the derived string, without expanding it.
pub fn slp_len(slp: &Slp) -> Result<u64, SlpError> {
    Ok(slp.lengths()?[slp.start])
}

/// The derived string, refusing anything longer than `max_len`.
pub fn slp_expand(slp: &Slp, max_len: u64) -> Result<String, SlpError> {
    if slp_len(slp)? > max_len {
        return Err(SlpError::Overflow { limit: max_len });
    }
    let mut out = String::new();
    let mut stack = vec![Sym::N(slp.start)];
    while let Some(sym) = stack.pop() {
        match sym {
            Sym::T(c) => out.push(c),
            Sym::N(i) => match slp.productions[i] {
                Production::Empty => {}
                Production::Term(c) => out.push(c),
                Production::Pair(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            },
        }
    }
    Ok(out)
}

/// Equality of derived strings: lengths first, then expansion up to
/// [`DEFAULT_MAX_LEN`].
pub fn slp_eq(a: &Slp, b: &Slp) -> Result<bool, SlpError> {
    if slp_len(a)? != slp_len(b)? {
        return Ok(false);
    }
    Ok(slp_expand(a, DEFAULT_MAX_LEN)? == slp_expand(b, DEFAULT_MAX_LEN)?)
}

fn sym_text(slp: &Slp, s: Sym) -> String {
    match s {
        Sym::T(c) => format!("'{c}'"),
        Sym::N(i) => slp.names[i].clone(),
    }
}

/// Text form, start production first, each nonterminal before the ones it
/// uses.
pub fn format_slp(slp: &Slp) -> String {
    let mut out = String::new();
    let mut order: Vec<usize> = (0..slp.productions.len()).rev().collect();
    order.retain(|&i| i != slp.start);
    order.insert(0, slp.start);
    for i in order {
        let _ = match slp.productions[i] {
            Production::Empty => writeln!(out, "{} ->", slp.names[i]),
            Production::Term(c) => writeln!(out, "{} -> '{c}'", slp.names[i]),
            Production::Pair(a, b) => {
                writeln!(out, "{} -> {} {}", slp.names[i], sym_text(slp, a), sym_text(slp, b))
            }
        };
    }
    out
}

/// Reads the text form; productions may appear in any order after the
/// start production.
pub fn parse_slp(text: &str) -> Result<Slp, SlpError> {
    let err = |line: usize, message: String| SlpError::Parse { line, message };
    enum Tok {
        T(char),
        N(String),
    }
    let mut rules: Vec<(usize, String, Vec<Tok>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (lhs, rhs) = raw
            .split_once("->")
            .ok_or_else(|| err(line, "expected `NAME -> ...`".into()))?;
        let lhs = lhs.trim();
        if lhs.is_empty() || lhs.contains(char::is_whitespace) || lhs.starts_with('\'') {
            return Err(err(line, format!("bad nonterminal name {lhs:?}")));
        }
        let mut toks = Vec::new();
        let mut chars = rhs.trim().chars().peekable();
        while let Some(c) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            if c == '\'' {
                let (Some(sym), Some('\'')) = (chars.next(), chars.next()) else {
                    return Err(err(line, "bad quoted terminal".into()));
                };
                toks.push(Tok::T(sym));
            } else {
                let mut name = c.to_string();
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() {
                        break;
                    }
                    name.push(d);
                    chars.next();
                }
                toks.push(Tok::N(name));
            }
        }
        rules.push((line, lhs.to_owned(), toks));
    }
    if rules.is_empty() {
        return Err(err(1, "no productions".into()));
    }

    let mut index = HashMap::new();
    for (k, (line, name, _)) in rules.iter().enumerate() {
        if index.insert(name.clone(), k).is_some() {
            return Err(err(*line, format!("{name} defined twice")));
        }
    }

    // Order nonterminals so that each follows the ones it uses.
    let resolve = |line: usize, t: &Tok| -> Result<Result<usize, char>, SlpError> {
        match t {
            Tok::T(c) => Ok(Err(*c)),
            Tok::N(n) => index
                .get(n)
                .map(|&k| Ok(k))
                .ok_or_else(|| err(line, format!("undefined nonterminal {n}"))),
        }
    };
    let mut order = Vec::new();
    let mut mark = vec![0u8; rules.len()];
    type Resolver<'a> = dyn Fn(usize, &Tok) -> Result<Result<usize, char>, SlpError> + 'a;
    fn visit(
        k: usize,
        rules: &[(usize, String, Vec<Tok>)],
        resolve: &Resolver<'_>,
        mark: &mut [u8],
        order: &mut Vec<usize>,
    ) -> Result<(), SlpError> {
        match mark[k] {
            2 => return Ok(()),
            1 => {
                return Err(SlpError::Parse {
                    line: rules[k].0,
                    message: format!("{} is defined in terms of itself", rules[k].1),
                })
            }
            _ => {}
        }
        mark[k] = 1;
        for t in &rules[k].2 {
            if let Ok(j) = resolve(rules[k].0, t)? {
                visit(j, rules, resolve, mark, order)?;
            }
        }
        mark[k] = 2;
        order.push(k);
        Ok(())
    }
    for k in 0..rules.len() {
        visit(k, &rules, &resolve, &mut mark, &mut order)?;
    }
    let mut position = vec![0; rules.len()];
    for (p, &k) in order.iter().enumerate() {
        position[k] = p;
    }

    let mut names = Vec::new();
    let mut productions = Vec::new();
    for &k in &order {
        let (line, name, toks) = &rules[k];
        let sym = |t: &Tok| -> Result<Sym, SlpError> {
            Ok(match resolve(*line, t)? {
                Ok(j) => Sym::N(position[j]),
                Err(c) => Sym::T(c),
            })
        };
        let p = match toks.as_slice() {
            [] => Production::Empty,
            [Tok::T(c)] => Production::Term(*c),
            [a, b] => Production::Pair(sym(a)?, sym(b)?),
            _ => return Err(err(*line, "expected nothing, one quoted terminal, or two symbols".into())),
        };
        names.push(name.clone());
        productions.push(p);
    }
    Ok(Slp {
        names,
        productions,
        start: position[0],
    })
}
