//! One-way multi-head nondeterministic finite automata.
//!
//! Heads start on the first symbol (position 0). The input is followed by a
//! single right end-marker at position `m`; a head on the end-marker may
//! still be told to advance and simply stays put. A run accepts as soon as
//! it enters an accepting state, wherever the heads are.

mod format;
mod library;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use format::{export_machine, import_machine, to_dot, FormatError};
pub use library::{divisibility_machine, s_checker_machine, sequential_intersection, Divisor};

pub type StateId = usize;

/// What one head must see for a transition to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeadRead {
    Symbol(char),
    End,
    Any,
}

impl HeadRead {
    fn admits(self, subject: &[char], pos: usize) -> bool {
        match self {
            HeadRead::Any => true,
            HeadRead::End => pos == subject.len(),
            HeadRead::Symbol(c) => subject.get(pos) == Some(&c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub reads: Vec<HeadRead>,
    /// Head pairs that must be on the same cell (sensing machines only).
    pub eq: Vec<(usize, usize)>,
    /// Head pairs that must be on different cells (sensing machines only).
    pub neq: Vec<(usize, usize)>,
    pub to: StateId,
    /// 0 or 1 per head.
    pub advance: Vec<u8>,
}

/// Where a compiled machine came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub source: String,
    pub variant: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiheadMachine {
    pub name: String,
    pub heads: usize,
    pub sensing: bool,
    pub alphabet: BTreeSet<char>,
    pub states: Vec<String>,
    pub initial: StateId,
    pub accepting: BTreeSet<StateId>,
    pub transitions: Vec<Transition>,
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineViolation {
    NoHeads,
    NoStates,
    StateOutOfRange { what: String },
    ArityMismatch { transition: usize },
    AdvanceNotUnit { transition: usize, head: usize, value: u8 },
    HeadOutOfRange { transition: usize, head: usize },
    ConstraintOnNonSensing { transition: usize },
    UnknownSymbol { transition: usize, symbol: char },
}

impl fmt::Display for MachineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineViolation::NoHeads => f.write_str("machine has no heads"),
            MachineViolation::NoStates => f.write_str("machine has no states"),
            MachineViolation::StateOutOfRange { what } => write!(f, "{what}: state out of range"),
            MachineViolation::ArityMismatch { transition } => {
                write!(f, "transition {transition}: reads/advance length differs from head count")
            }
            MachineViolation::AdvanceNotUnit {
                transition,
                head,
                value,
            } => write!(f, "transition {transition}: head {head} advances by {value}"),
            MachineViolation::HeadOutOfRange { transition, head } => {
                write!(f, "transition {transition}: head {head} does not exist")
            }
            MachineViolation::ConstraintOnNonSensing { transition } => {
                write!(f, "transition {transition}: coincidence test on a non-sensing machine")
            }
            MachineViolation::UnknownSymbol { transition, symbol } => {
                write!(f, "transition {transition}: symbol {symbol:?} not in alphabet")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("subject symbol {0:?} is not in the machine alphabet")]
    AlphabetMismatch(char),
    #[error("invalid machine: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidMachine(Vec<MachineViolation>),
}

/// A point of the configuration graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimStats {
    /// Distinct configurations reached.
    pub visited: u64,
    pub accepted: bool,
}

impl MultiheadMachine {
    pub fn validate(&self) -> Result<(), Vec<MachineViolation>> {
        let mut out = Vec::new();
        if self.heads == 0 {
            out.push(MachineViolation::NoHeads);
        }
        if self.states.is_empty() {
            out.push(MachineViolation::NoStates);
        }
        let n = self.states.len();
        if self.initial >= n {
            out.push(MachineViolation::StateOutOfRange {
                what: "initial".into(),
            });
        }
        if self.accepting.iter().any(|&s| s >= n) {
            out.push(MachineViolation::StateOutOfRange {
                what: "accepting".into(),
            });
        }
        for (t, rule) in self.transitions.iter().enumerate() {
            if rule.from >= n || rule.to >= n {
                out.push(MachineViolation::StateOutOfRange {
                    what: format!("transition {t}"),
                });
            }
            if rule.reads.len() != self.heads || rule.advance.len() != self.heads {
                out.push(MachineViolation::ArityMismatch { transition: t });
            }
            for (head, &value) in rule.advance.iter().enumerate() {
                if value > 1 {
                    out.push(MachineViolation::AdvanceNotUnit {
                        transition: t,
                        head,
                        value,
                    });
                }
            }
            for read in &rule.reads {
                if let HeadRead::Symbol(c) = read {
                    if !self.alphabet.contains(c) {
                        out.push(MachineViolation::UnknownSymbol {
                            transition: t,
                            symbol: *c,
                        });
                    }
                }
            }
            let constraints = rule.eq.iter().chain(&rule.neq);
            if !self.sensing && (!rule.eq.is_empty() || !rule.neq.is_empty()) {
                out.push(MachineViolation::ConstraintOnNonSensing { transition: t });
            }
            for &(i, j) in constraints {
                for head in [i, j] {
                    if head >= self.heads {
                        out.push(MachineViolation::HeadOutOfRange { transition: t, head });
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// `|states| · (m+1)^heads`, saturating.
    pub fn configuration_bound(&self, subject_len: usize) -> u128 {
        let per_head = subject_len as u128 + 1;
        let mut bound = self.states.len() as u128;
        for _ in 0..self.heads {
            bound = bound.saturating_mul(per_head);
        }
        bound
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    fn outgoing(&self) -> Vec<Vec<&Transition>> {
        let mut table = vec![Vec::new(); self.states.len()];
        for rule in &self.transitions {
            table[rule.from].push(rule);
        }
        table
    }

    /// Breadth-first reachability over the configuration graph.
    pub fn simulate(&self, subject: &str) -> Result<SimStats, SimError> {
        self.validate().map_err(SimError::InvalidMachine)?;
        let subject: Vec<char> = subject.chars().collect();
        if let Some(&c) = subject.iter().find(|c| !self.alphabet.contains(c)) {
            return Err(SimError::AlphabetMismatch(c));
        }
        let m = subject.len();
        let table = self.outgoing();

        let start = Configuration {
            state: self.initial,
            positions: vec![0; self.heads],
        };
        let mut seen: HashSet<Configuration> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        if self.accepting.contains(&start.state) {
            return Ok(SimStats {
                visited: 1,
                accepted: true,
            });
        }
        queue.push_back(start);

        while let Some(conf) = queue.pop_front() {
            for rule in &table[conf.state] {
                let pos = &conf.positions;
                let applies = rule.reads.iter().zip(pos).all(|(r, &p)| r.admits(&subject, p))
                    && (!self.sensing
                        || (rule.eq.iter().all(|&(i, j)| pos[i] == pos[j])
                            && rule.neq.iter().all(|&(i, j)| pos[i] != pos[j])));
                if !applies {
                    continue;
                }
                let positions: Vec<usize> = pos
                    .iter()
                    .zip(&rule.advance)
                    .map(|(&p, &a)| (p + a as usize).min(m))
                    .collect();
                assert!(
                    positions.iter().zip(pos).all(|(new, old)| new >= old),
                    "head moved left"
                );
                let next = Configuration {
                    state: rule.to,
                    positions,
                };
                if seen.contains(&next) {
                    continue;
                }
                seen.insert(next.clone());
                if self.accepting.contains(&next.state) {
                    return Ok(SimStats {
                        visited: seen.len() as u64,
                        accepted: true,
                    });
                }
                queue.push_back(next);
            }
        }
        Ok(SimStats {
            visited: seen.len() as u64,
            accepted: false,
        })
    }
}
