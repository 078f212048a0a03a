//! Compilation of expressions into multi-head automata.
//!
//! [`compile_sensing`] uses two heads per referenced group plus a work
//! pair and detects head coincidence. [`compile_nonsensing`] uses one main
//! head plus a pair per reference occurrence, guessing coincidence and
//! checking the guess by running both heads to the end-marker.

mod nonsensing;
mod sensing;
mod skeleton;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::multihead::{HeadRead, MultiheadMachine, Provenance, SimError, SimStats, Transition};
use crate::syntax::{c_of, literals_of, referenced_vars, render, validate, Ast, Complexity, Violation};

pub use nonsensing::{compile_nonsensing, compile_nonsensing_over};
pub use sensing::{compile_sensing, compile_sensing_over};
pub use skeleton::MAX_OPS;

/// Upper bound on compiled machine states.
pub const MAX_STATES: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("invalid expression: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidAst(Vec<Violation>),
    #[error("unbounded occurrences: some reference sits under a star or plus")]
    UnboundedOccurrences,
    #[error("machine too large: {0}")]
    TooLarge(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Sensing,
    Nonsensing,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Sensing => "sensing",
            Variant::Nonsensing => "nonsensing",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Head counts of the two compilations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadBudget {
    /// `2k + 2` for `k` referenced groups.
    pub sensing_heads: usize,
    /// `2c + 1`, or `None` when `c` is unbounded.
    pub nonsensing_heads: Option<usize>,
}

impl fmt::Display for HeadBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sensing {}, nonsensing ", self.sensing_heads)?;
        match self.nonsensing_heads {
            Some(h) => write!(f, "{h}"),
            None => f.write_str("ω"),
        }
    }
}

pub fn head_bounds(ast: &Ast) -> Result<HeadBudget, CompileError> {
    validate(ast).map_err(CompileError::InvalidAst)?;
    let k = referenced_vars(ast).len();
    Ok(HeadBudget {
        sensing_heads: 2 * k + 2,
        nonsensing_heads: match c_of(ast) {
            Complexity::Finite(c) => Some(2 * c as usize + 1),
            Complexity::Omega => None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineMatchError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Simulate(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineMatch {
    pub matched: bool,
    pub stats: SimStats,
    pub heads: usize,
    pub states: usize,
}

pub fn compile(ast: &Ast, variant: Variant, extra: &BTreeSet<char>) -> Result<MultiheadMachine, CompileError> {
    match variant {
        Variant::Sensing => compile_sensing_over(ast, extra),
        Variant::Nonsensing => compile_nonsensing_over(ast, extra),
    }
}

/// Full match of `subject` by compiling and simulating.
pub fn match_via_machine(ast: &Ast, subject: &str, variant: Variant) -> Result<MachineMatch, MachineMatchError> {
    let extra: BTreeSet<char> = subject.chars().collect();
    let machine = compile(ast, variant, &extra)?;
    let stats = machine.simulate(subject)?;
    Ok(MachineMatch {
        matched: stats.accepted,
        stats,
        heads: machine.heads,
        states: machine.states.len(),
    })
}

/// One outgoing rule of a symbolic state.
pub(crate) struct Edge<S> {
    pub reads: Vec<HeadRead>,
    pub eq: Vec<(usize, usize)>,
    pub advance: Vec<u8>,
    pub to: S,
}

impl<S> Edge<S> {
    pub fn new(heads: usize, to: S) -> Self {
        Edge {
            reads: vec![HeadRead::Any; heads],
            eq: Vec::new(),
            advance: vec![0; heads],
            to,
        }
    }

    pub fn read(mut self, head: usize, read: HeadRead) -> Self {
        self.reads[head] = read;
        self
    }

    pub fn sym(self, head: usize, c: char) -> Self {
        self.read(head, HeadRead::Symbol(c))
    }

    pub fn eq(mut self, i: usize, j: usize) -> Self {
        self.eq.push((i, j));
        self
    }

    pub fn adv(mut self, head: usize) -> Self {
        self.advance[head] = 1;
        self
    }
}

pub(crate) trait Symbolic: Clone + Eq + Hash {
    fn name(&self) -> String;
    fn accepting(&self) -> bool;
}

pub(crate) struct Blueprint {
    pub name: String,
    pub heads: usize,
    pub sensing: bool,
    pub variant: Variant,
    pub alphabet: BTreeSet<char>,
}

/// Builds the machine whose states are the symbolic states reachable from
/// `start` under `expand`.
pub(crate) fn explore<S: Symbolic>(
    ast: &Ast,
    plan: Blueprint,
    start: S,
    mut expand: impl FnMut(&S) -> Vec<Edge<S>>,
) -> Result<MultiheadMachine, CompileError> {
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut accepting = BTreeSet::new();
    let mut transitions = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |s: S, states: &mut Vec<String>, queue: &mut VecDeque<S>| -> Result<usize, CompileError> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if states.len() >= MAX_STATES {
            return Err(CompileError::TooLarge(format!("more than {MAX_STATES} states")));
        }
        let i = states.len();
        states.push(s.name());
        if s.accepting() {
            accepting.insert(i);
        }
        index.insert(s.clone(), i);
        queue.push_back(s);
        Ok(i)
    };

    intern(start, &mut states, &mut queue)?;
    let mut from = 0;
    while let Some(s) = queue.pop_front() {
        for edge in expand(&s) {
            let to = intern(edge.to, &mut states, &mut queue)?;
            transitions.push(Transition {
                from,
                reads: edge.reads,
                eq: edge.eq,
                neq: Vec::new(),
                to,
                advance: edge.advance,
            });
        }
        from += 1;
    }

    let mut alphabet = plan.alphabet;
    alphabet.extend(literals_of(ast));
    Ok(MultiheadMachine {
        name: plan.name,
        heads: plan.heads,
        sensing: plan.sensing,
        alphabet,
        states,
        initial: 0,
        accepting,
        transitions,
        provenance: Some(Provenance {
            source: render(ast),
            variant: plan.variant.name().into(),
        }),
    })
}
