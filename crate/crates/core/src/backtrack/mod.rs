//! Reference matcher: exhaustive search over derivations.
//!
//! Semantics shared by every engine in this crate:
//!
//! * Entering group `i` makes `i` uninstantiated; completing it binds `i` to
//!   the segment just consumed, replacing any earlier binding.
//! * `\k` consumes a copy of the current binding of `k` and fails when `k`
//!   is uninstantiated.
//! * Every iteration of `*`, and every iteration of `+` after the first,
//!   must consume at least one symbol.
//!
//! The search is deterministic (left alternative first, fewer iterations
//! first) so reported witnesses are reproducible.

mod enumerate;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{self, group_count, literals_of, Ast, GroupIndex, Violation};

pub use enumerate::{enumerate_language, enumerate_language_with_cap, DEFAULT_DERIVATION_CAP};

/// Default number of instructions the matcher may execute per call.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("invalid expression: {}", join_violations(.0))]
    InvalidAst(Vec<Violation>),
    #[error("derivation budget of {0} steps exhausted")]
    ResourceLimit(u64),
    #[error("marker {0:?} occurs in the expression or the subject")]
    MarkerCollision(char),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Half-open `[start, end)` offsets into the subject.
pub type Segment = (usize, usize);

/// Group bindings at the end of a successful derivation. Every group of the
/// expression has an entry; `None` means uninstantiated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CaptureEnv {
    pub bindings: BTreeMap<GroupIndex, Option<Segment>>,
}

impl CaptureEnv {
    pub fn get(&self, group: GroupIndex) -> Option<Segment> {
        self.bindings.get(&group).copied().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub captures: CaptureEnv,
    pub segment: Segment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    pub matched: bool,
    pub witness: Option<Witness>,
}

impl MatchOutcome {
    fn no_match() -> Self {
        MatchOutcome {
            matched: false,
            witness: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Inst {
    Char(char),
    /// Try the first target, then the second.
    Split(usize, usize),
    Jmp(usize),
    Open(GroupIndex),
    Close(GroupIndex),
    Backref(GroupIndex),
    LoopEnter(usize),
    LoopCheck(usize),
    /// Index into `Backtracker::repeats`.
    Repeat(usize),
    Match,
}

/// An expression lowered to a backtracking program.
#[derive(Debug, Clone)]
pub struct Backtracker {
    program: Vec<Inst>,
    repeats: Vec<(Ast, u32)>,
    groups: u32,
    loops: usize,
    budget: u64,
}

#[derive(Clone)]
struct Regs {
    caps: Vec<Option<Segment>>,
    opens: Vec<usize>,
    loops: Vec<usize>,
}

impl Backtracker {
    pub fn new(ast: &Ast) -> Result<Self, MatchError> {
        syntax::validate(ast).map_err(MatchError::InvalidAst)?;
        let mut bt = Backtracker {
            program: Vec::new(),
            repeats: Vec::new(),
            groups: group_count(ast),
            loops: 0,
            budget: DEFAULT_STEP_BUDGET,
        };
        bt.lower(ast);
        bt.program.push(Inst::Match);
        Ok(bt)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn lower(&mut self, ast: &Ast) {
        match ast {
            Ast::Literal(c) => self.program.push(Inst::Char(*c)),
            Ast::Epsilon => {}
            Ast::Concat(items) => items.iter().for_each(|item| self.lower(item)),
            Ast::Union(l, r) => {
                let split = self.program.len();
                self.program.push(Inst::Split(0, 0));
                self.lower(l);
                let jmp = self.program.len();
                self.program.push(Inst::Jmp(0));
                let right = self.program.len();
                self.lower(r);
                let end = self.program.len();
                self.program[split] = Inst::Split(split + 1, right);
                self.program[jmp] = Inst::Jmp(end);
            }
            Ast::Star(c) => {
                let slot = self.loops;
                self.loops += 1;
                let head = self.program.len();
                self.program.push(Inst::Split(0, 0));
                self.program.push(Inst::LoopEnter(slot));
                self.lower(c);
                self.program.push(Inst::LoopCheck(slot));
                self.program.push(Inst::Jmp(head));
                let exit = self.program.len();
                self.program[head] = Inst::Split(exit, head + 1);
            }
            Ast::Plus(c) => {
                self.lower(c);
                self.lower(&Ast::Star(c.clone()));
            }
            Ast::Repeat(c, n) => {
                self.program.push(Inst::Repeat(self.repeats.len()));
                self.repeats.push(((**c).clone(), *n));
            }
            Ast::Group(i, c) => {
                self.program.push(Inst::Open(*i));
                self.lower(c);
                self.program.push(Inst::Close(*i));
            }
            Ast::Backref(k) => self.program.push(Inst::Backref(*k)),
        }
    }

    /// Whole-subject match.
    pub fn match_full(&self, subject: &[char]) -> Result<MatchOutcome, MatchError> {
        let mut steps = 0u64;
        let mut stack: Vec<(usize, usize, Regs)> = vec![(
            0,
            0,
            Regs {
                caps: vec![None; self.groups as usize + 1],
                opens: vec![0; self.groups as usize + 1],
                loops: vec![0; self.loops],
            },
        )];

        'threads: while let Some((mut pc, mut pos, mut regs)) = stack.pop() {
            loop {
                steps += 1;
                if steps > self.budget {
                    return Err(MatchError::ResourceLimit(self.budget));
                }
                match &self.program[pc] {
                    Inst::Char(c) => {
                        if subject.get(pos) != Some(c) {
                            continue 'threads;
                        }
                        pos += 1;
                        pc += 1;
                    }
                    Inst::Split(first, second) => {
                        stack.push((*second, pos, regs.clone()));
                        pc = *first;
                    }
                    Inst::Jmp(target) => pc = *target,
                    Inst::Open(i) => {
                        regs.opens[*i as usize] = pos;
                        regs.caps[*i as usize] = None;
                        pc += 1;
                    }
                    Inst::Close(i) => {
                        regs.caps[*i as usize] = Some((regs.opens[*i as usize], pos));
                        pc += 1;
                    }
                    Inst::Backref(k) => {
                        let Some((s, e)) = regs.caps[*k as usize] else {
                            continue 'threads;
                        };
                        let len = e - s;
                        if pos + len > subject.len() || subject[s..e] != subject[pos..pos + len] {
                            continue 'threads;
                        }
                        steps += len as u64;
                        pos += len;
                        pc += 1;
                    }
                    Inst::LoopEnter(slot) => {
                        regs.loops[*slot] = pos;
                        pc += 1;
                    }
                    Inst::LoopCheck(slot) => {
                        if pos <= regs.loops[*slot] {
                            continue 'threads;
                        }
                        pc += 1;
                    }
                    Inst::Repeat(idx) => {
                        let (child, n) = &self.repeats[*idx];
                        let ends = repeat_ends(child, *n, subject, pos);
                        steps += ends.len() as u64;
                        let mut ends = ends.into_iter();
                        let Some(first) = ends.next() else {
                            continue 'threads;
                        };
                        for end in ends.rev() {
                            stack.push((pc + 1, end, regs.clone()));
                        }
                        pos = first;
                        pc += 1;
                    }
                    Inst::Match => {
                        if pos != subject.len() {
                            continue 'threads;
                        }
                        let bindings = (1..=self.groups)
                            .map(|g| (g, regs.caps[g as usize]))
                            .collect();
                        return Ok(MatchOutcome {
                            matched: true,
                            witness: Some(Witness {
                                captures: CaptureEnv { bindings },
                                segment: (0, subject.len()),
                            }),
                        });
                    }
                }
            }
        }
        Ok(MatchOutcome::no_match())
    }

    /// Leftmost, then shortest, segment of `subject` that matches in full.
    pub fn match_substring(&self, subject: &[char]) -> Result<Option<Witness>, MatchError> {
        for start in 0..=subject.len() {
            for end in start..=subject.len() {
                if let Some(mut w) = self.match_full(&subject[start..end])?.witness {
                    for seg in w.captures.bindings.values_mut().flatten() {
                        seg.0 += start;
                        seg.1 += start;
                    }
                    w.segment = (start, end);
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }
}

/// End offsets reachable from `start` through `child{n}`. The child has no
/// groups or references, so plain position sets are exact.
fn repeat_ends(child: &Ast, n: u32, subject: &[char], start: usize) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([start]);
    for _ in 0..n {
        let next = classical_step(child, &set, subject);
        if next.is_empty() || next == set {
            return next;
        }
        set = next;
    }
    set
}

fn classical_step(ast: &Ast, starts: &BTreeSet<usize>, subject: &[char]) -> BTreeSet<usize> {
    match ast {
        Ast::Literal(c) => starts
            .iter()
            .filter(|&&p| subject.get(p) == Some(c))
            .map(|p| p + 1)
            .collect(),
        Ast::Epsilon => starts.clone(),
        Ast::Union(l, r) => {
            let mut out = classical_step(l, starts, subject);
            out.extend(classical_step(r, starts, subject));
            out
        }
        Ast::Concat(items) => items
            .iter()
            .fold(starts.clone(), |set, item| classical_step(item, &set, subject)),
        Ast::Star(c) => classical_closure(c, starts.clone(), subject),
        Ast::Plus(c) => classical_closure(c, classical_step(c, starts, subject), subject),
        Ast::Repeat(c, n) => {
            let mut set = starts.clone();
            for _ in 0..*n {
                let next = classical_step(c, &set, subject);
                if next.is_empty() || next == set {
                    return next;
                }
                set = next;
            }
            set
        }
        Ast::Group(..) | Ast::Backref(_) => unreachable!("validated: no captures under repeat"),
    }
}

fn classical_closure(ast: &Ast, mut reached: BTreeSet<usize>, subject: &[char]) -> BTreeSet<usize> {
    let mut frontier = reached.clone();
    while !frontier.is_empty() {
        let next: BTreeSet<usize> = classical_step(ast, &frontier, subject)
            .difference(&reached)
            .copied()
            .collect();
        reached.extend(next.iter().copied());
        frontier = next;
    }
    reached
}

pub fn match_full(ast: &Ast, subject: &str) -> Result<MatchOutcome, MatchError> {
    let chars: Vec<char> = subject.chars().collect();
    Backtracker::new(ast)?.match_full(&chars)
}

pub fn match_substring(ast: &Ast, subject: &str) -> Result<Option<Segment>, MatchError> {
    let chars: Vec<char> = subject.chars().collect();
    Ok(Backtracker::new(ast)?
        .match_substring(&chars)?
        .map(|w| w.segment))
}

/// Membership-to-matching reduction: surround both sides with a marker
/// symbol that occurs in neither.
pub fn embed_membership(ast: &Ast, subject: &str, marker: char) -> Result<(Ast, String), MatchError> {
    if literals_of(ast).contains(&marker) || subject.contains(marker) {
        return Err(MatchError::MarkerCollision(marker));
    }
    let mut items = vec![Ast::Literal(marker)];
    match ast {
        Ast::Union(..) => items.push(syntax::wrap_group(ast)),
        Ast::Concat(children) => items.extend(children.iter().cloned()),
        Ast::Epsilon => {}
        other => items.push(other.clone()),
    }
    items.push(Ast::Literal(marker));
    Ok((Ast::concat(items), format!("{marker}{subject}{marker}")))
}

/// Matching-to-membership reduction: `Σ* ast Σ*`.
///
/// With two or more symbols the `Σ` alternation needs parentheses, which
/// capture, so the groups and references of `ast` move up by one.
pub fn wrap_matching(ast: &Ast, alphabet: &BTreeSet<char>) -> Ast {
    let sigma_star = match alphabet.len() {
        0 => return ast.clone(),
        1 => Ast::star(Ast::Literal(*alphabet.iter().next().unwrap())),
        _ => Ast::star(Ast::group(
            1,
            Ast::alternation(alphabet.iter().map(|&c| Ast::Literal(c))),
        )),
    };
    syntax::concat_compose(&[sigma_star.clone(), ast.clone(), sigma_star])
}
