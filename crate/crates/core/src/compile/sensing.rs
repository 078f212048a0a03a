//! Sensing compilation with `2k + 2` heads.
//!
//! Each referenced group `v` owns a pair `(L_v, R_v)` marking its current
//! binding. The work pair is `W_l` and `W_r`; `W_r` reads the input. A
//! reference catches `W_l` up to `W_r`, then walks `L_v` over the binding
//! while `W_r` reads the copy, stopping when `L_v` meets `R_v`. The pair
//! is then moved onto the copy (`L_v` to `W_l`, `R_v` to `W_r`), so the
//! binding is marked again further right. All "move until" loops advance
//! one head freely and leave when a coincidence test succeeds.

use std::collections::BTreeSet;

use super::skeleton::{lower, Op, Skeleton};
use super::{explore, Blueprint, CompileError, Edge, Symbolic, Variant};
use crate::multihead::{HeadRead, MultiheadMachine};
use crate::syntax::{literals_of, referenced_vars, validate, Ast, GroupIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Phase {
    Scan,
    /// Replaying variable `var`; `advanced` once a symbol was consumed.
    Compare { var: usize, advanced: bool },
    ToCopyStart { var: usize, advanced: bool },
    ToCopyEnd { var: usize, advanced: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum State {
    At { pc: usize, loops: u64, bound: u64, phase: Phase },
    Accept,
}

impl Symbolic for State {
    fn name(&self) -> String {
        match self {
            State::Accept => "accept".into(),
            State::At {
                pc,
                loops,
                bound,
                phase,
            } => {
                let phase = match phase {
                    Phase::Scan => "scan".to_string(),
                    Phase::Compare { var, advanced } => format!("cmp{var}{}", if *advanced { "+" } else { "" }),
                    Phase::ToCopyStart { var, advanced } => format!("mark{var}l{}", if *advanced { "+" } else { "" }),
                    Phase::ToCopyEnd { var, advanced } => format!("mark{var}r{}", if *advanced { "+" } else { "" }),
                };
                format!("p{pc}.{phase}.l{loops:x}.b{bound:x}")
            }
        }
    }

    fn accepting(&self) -> bool {
        matches!(self, State::Accept)
    }
}

struct Compiler {
    sk: Skeleton,
    vars: Vec<GroupIndex>,
    alphabet: BTreeSet<char>,
    heads: usize,
}

impl Compiler {
    fn var(&self, g: GroupIndex) -> Option<usize> {
        self.vars.iter().position(|&v| v == g)
    }

    fn left(var: usize) -> usize {
        2 * var
    }

    fn right(var: usize) -> usize {
        2 * var + 1
    }

    fn wl(&self) -> usize {
        self.heads - 2
    }

    fn wr(&self) -> usize {
        self.heads - 1
    }

    fn at(&self, pc: usize, loops: u64, bound: u64, phase: Phase) -> State {
        State::At {
            pc,
            loops: loops & self.sk.enclosing[pc],
            bound,
            phase,
        }
    }

    fn expand(&self, s: &State) -> Vec<Edge<State>> {
        let State::At {
            pc,
            loops,
            bound,
            phase,
        } = *s
        else {
            return Vec::new();
        };
        let h = self.heads;
        let (wl, wr) = (self.wl(), self.wr());
        let consumed = u64::MAX;
        match phase {
            Phase::Compare { var, advanced } => {
                let l = Self::left(var);
                let mut out: Vec<Edge<State>> = self
                    .alphabet
                    .iter()
                    .map(|&c| {
                        let to = self.at(pc, loops, bound, Phase::Compare { var, advanced: true });
                        Edge::new(h, to).sym(l, c).sym(wr, c).adv(l).adv(wr)
                    })
                    .collect();
                let to = self.at(pc, loops, bound, Phase::ToCopyStart { var, advanced });
                out.push(Edge::new(h, to).eq(l, Self::right(var)));
                out
            }
            Phase::ToCopyStart { var, advanced } => {
                let l = Self::left(var);
                vec![
                    Edge::new(h, s.clone()).adv(l),
                    Edge::new(h, self.at(pc, loops, bound, Phase::ToCopyEnd { var, advanced })).eq(l, wl),
                ]
            }
            Phase::ToCopyEnd { var, advanced } => {
                let r = Self::right(var);
                let loops = if advanced { consumed } else { loops };
                vec![
                    Edge::new(h, s.clone()).adv(r),
                    Edge::new(h, self.at(pc + 1, loops, bound, Phase::Scan)).eq(r, wr),
                ]
            }
            Phase::Scan => match self.sk.ops[pc] {
                Op::Char(c) => vec![Edge::new(h, self.at(pc + 1, consumed, bound, Phase::Scan)).sym(wr, c).adv(wr)],
                Op::Split(a, b) => vec![
                    Edge::new(h, self.at(a, loops, bound, Phase::Scan)),
                    Edge::new(h, self.at(b, loops, bound, Phase::Scan)),
                ],
                Op::Jmp(a) => vec![Edge::new(h, self.at(a, loops, bound, Phase::Scan))],
                Op::Open(g) => match self.var(g) {
                    None => vec![Edge::new(h, self.at(pc + 1, loops, bound, Phase::Scan))],
                    Some(v) => {
                        let l = Self::left(v);
                        let unbound = bound & !(1 << v);
                        vec![
                            Edge::new(h, s.clone()).adv(l),
                            Edge::new(h, self.at(pc + 1, loops, unbound, Phase::Scan)).eq(l, wr),
                        ]
                    }
                },
                Op::Close(g) => match self.var(g) {
                    None => vec![Edge::new(h, self.at(pc + 1, loops, bound, Phase::Scan))],
                    Some(v) => {
                        let r = Self::right(v);
                        vec![
                            Edge::new(h, s.clone()).adv(r),
                            Edge::new(h, self.at(pc + 1, loops, bound | (1 << v), Phase::Scan)).eq(r, wr),
                        ]
                    }
                },
                Op::Ref { group, .. } => {
                    let v = self.var(group).expect("referenced group has a head pair");
                    if bound & (1 << v) == 0 {
                        return Vec::new();
                    }
                    let compare = self.at(
                        pc,
                        loops,
                        bound,
                        Phase::Compare {
                            var: v,
                            advanced: false,
                        },
                    );
                    vec![Edge::new(h, s.clone()).adv(wl), Edge::new(h, compare).eq(wl, wr)]
                }
                Op::LoopEnter(l) => vec![Edge::new(h, self.at(pc + 1, loops & !(1 << l), bound, Phase::Scan))],
                Op::LoopCheck(l) => {
                    if loops & (1 << l) == 0 {
                        Vec::new()
                    } else {
                        vec![Edge::new(h, self.at(pc + 1, loops, bound, Phase::Scan))]
                    }
                }
                Op::Match => vec![Edge::new(h, State::Accept).read(wr, HeadRead::End)],
            },
        }
    }
}

/// Sensing machine over the expression's own literals.
pub fn compile_sensing(ast: &Ast) -> Result<MultiheadMachine, CompileError> {
    compile_sensing_over(ast, &BTreeSet::new())
}

/// Sensing machine whose alphabet also contains `extra`.
pub fn compile_sensing_over(ast: &Ast, extra: &BTreeSet<char>) -> Result<MultiheadMachine, CompileError> {
    validate(ast).map_err(CompileError::InvalidAst)?;
    let vars: Vec<GroupIndex> = referenced_vars(ast).into_iter().collect();
    if vars.len() > 64 {
        return Err(CompileError::TooLarge("more than 64 referenced groups".into()));
    }
    let mut alphabet = literals_of(ast);
    alphabet.extend(extra);
    let heads = 2 * vars.len() + 2;
    let compiler = Compiler {
        sk: lower(ast)?,
        vars,
        alphabet: alphabet.clone(),
        heads,
    };
    let start = compiler.at(0, 0, 0, Phase::Scan);
    let plan = Blueprint {
        name: "sensing".into(),
        heads,
        sensing: true,
        variant: Variant::Sensing,
        alphabet,
    };
    explore(ast, plan, start, |s| compiler.expand(s))
}
