//! Generative enumeration of a language up to a length bound.
//!
//! Walks the expression producing strings instead of consuming a subject;
//! it shares no code with the matcher and serves as its oracle.

use std::collections::BTreeSet;

use super::MatchError;
use crate::syntax::{self, group_count, Ast};

/// Default cap on the number of derivation steps explored.
pub const DEFAULT_DERIVATION_CAP: u64 = 10_000_000;

#[derive(Clone)]
struct Partial {
    out: Vec<char>,
    caps: Vec<Option<(usize, usize)>>,
}

type Cont<'a> = &'a mut dyn FnMut(&mut Enumerator, Partial) -> Result<(), MatchError>;

struct Enumerator {
    max_len: usize,
    steps: u64,
    cap: u64,
}

impl Enumerator {
    fn tick(&mut self) -> Result<(), MatchError> {
        self.steps += 1;
        if self.steps > self.cap {
            Err(MatchError::ResourceLimit(self.cap))
        } else {
            Ok(())
        }
    }

    fn derive(&mut self, ast: &Ast, mut st: Partial, k: Cont) -> Result<(), MatchError> {
        self.tick()?;
        match ast {
            Ast::Literal(c) => {
                if st.out.len() < self.max_len {
                    st.out.push(*c);
                    k(self, st)?;
                }
                Ok(())
            }
            Ast::Epsilon => k(self, st),
            Ast::Union(l, r) => {
                self.derive(l, st.clone(), k)?;
                self.derive(r, st, k)
            }
            Ast::Concat(items) => self.sequence(items, st, k),
            Ast::Star(c) => self.iterate(c, st, k),
            Ast::Plus(c) => self.derive(c, st, &mut |e, s| e.iterate(c, s, k)),
            Ast::Repeat(c, n) => self.power(c, *n, st, k),
            Ast::Group(i, c) => {
                let i = *i as usize;
                let start = st.out.len();
                st.caps[i] = None;
                self.derive(c, st, &mut |e, mut s| {
                    s.caps[i] = Some((start, s.out.len()));
                    k(e, s)
                })
            }
            Ast::Backref(i) => {
                let Some((s, e)) = st.caps[*i as usize] else {
                    return Ok(());
                };
                if st.out.len() + (e - s) <= self.max_len {
                    st.out.extend_from_within(s..e);
                    k(self, st)?;
                }
                Ok(())
            }
        }
    }

    fn sequence(&mut self, items: &[Ast], st: Partial, k: Cont) -> Result<(), MatchError> {
        match items.split_first() {
            None => k(self, st),
            Some((first, rest)) => self.derive(first, st, &mut |e, s| e.sequence(rest, s, k)),
        }
    }

    /// Zero or more further iterations, each producing at least one symbol.
    fn iterate(&mut self, body: &Ast, st: Partial, k: Cont) -> Result<(), MatchError> {
        k(self, st.clone())?;
        let before = st.out.len();
        self.derive(body, st, &mut |e, s| {
            if s.out.len() > before {
                e.iterate(body, s, k)
            } else {
                Ok(())
            }
        })
    }

    fn power(&mut self, body: &Ast, n: u32, st: Partial, k: Cont) -> Result<(), MatchError> {
        if n == 0 {
            return k(self, st);
        }
        self.derive(body, st, &mut |e, s| e.power(body, n - 1, s, k))
    }
}

/// All strings of length at most `max_len` in the language of `ast`.
pub fn enumerate_language(ast: &Ast, max_len: usize) -> Result<BTreeSet<String>, MatchError> {
    enumerate_language_with_cap(ast, max_len, DEFAULT_DERIVATION_CAP)
}

pub fn enumerate_language_with_cap(
    ast: &Ast,
    max_len: usize,
    cap: u64,
) -> Result<BTreeSet<String>, MatchError> {
    syntax::validate(ast).map_err(MatchError::InvalidAst)?;
    let mut found = BTreeSet::new();
    let mut e = Enumerator {
        max_len,
        steps: 0,
        cap,
    };
    let start = Partial {
        out: Vec::new(),
        caps: vec![None; group_count(ast) as usize + 1],
    };
    e.derive(ast, start, &mut |_, s| {
        found.insert(s.out.iter().collect());
        Ok(())
    })?;
    Ok(found)
}
