//! Non-sensing compilation with `2c + 1` heads.
//!
//! Head 0 reads the input. Each reference occurrence owns a slot, a pair
//! `(T, U)` of heads that travel with head 0 until the machine guesses that
//! the group about to open is the binding the occurrence will copy. `T`
//! then stays at the opening position and `U` at the closing one. At the
//! reference, `T` is compared against head 0 until the machine guesses it
//! has reached `U`; the guess is checked by running `T` and `U` in lockstep
//! to the end-marker, which they must reach together.

use std::collections::BTreeSet;

use super::skeleton::{lower, Op, Skeleton};
use super::{explore, Blueprint, CompileError, Edge, Symbolic, Variant};
use crate::multihead::{HeadRead, MultiheadMachine};
use crate::syntax::{c_of, literals_of, validate, Ast, GroupIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    /// Both heads move with the main head.
    Traveling,
    /// `T` marks the start of an open capture of the group; `U` travels.
    Opened(GroupIndex),
    /// `T` and `U` delimit a finished capture of the group.
    Parked(GroupIndex),
    /// Both heads sit on the end-marker.
    Used,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Phase {
    Scan,
    Compare { slot: usize, advanced: bool },
    Verify { slot: usize, advanced: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum State {
    At {
        pc: usize,
        loops: u64,
        slots: Vec<Slot>,
        phase: Phase,
    },
    Accept,
}

impl Symbolic for State {
    fn name(&self) -> String {
        match self {
            State::Accept => "accept".into(),
            State::At {
                pc,
                loops,
                slots,
                phase,
            } => {
                let slots: String = slots
                    .iter()
                    .map(|s| match s {
                        Slot::Traveling => "t".to_string(),
                        Slot::Opened(g) => format!("o{g}"),
                        Slot::Parked(g) => format!("p{g}"),
                        Slot::Used => "u".to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(",");
                let phase = match phase {
                    Phase::Scan => "scan".to_string(),
                    Phase::Compare { slot, advanced } => format!("cmp{slot}{}", if *advanced { "+" } else { "" }),
                    Phase::Verify { slot, advanced } => format!("chk{slot}{}", if *advanced { "+" } else { "" }),
                };
                format!("p{pc}.{phase}.l{loops:x}.[{slots}]")
            }
        }
    }

    fn accepting(&self) -> bool {
        matches!(self, State::Accept)
    }
}

const MAIN: usize = 0;

fn t_head(slot: usize) -> usize {
    1 + 2 * slot
}

fn u_head(slot: usize) -> usize {
    2 + 2 * slot
}

struct Compiler {
    sk: Skeleton,
    alphabet: BTreeSet<char>,
    heads: usize,
}

impl Compiler {
    fn at(&self, pc: usize, loops: u64, slots: Vec<Slot>, phase: Phase) -> State {
        State::At {
            pc,
            loops: loops & self.sk.enclosing[pc],
            slots,
            phase,
        }
    }

    /// Main head advances, dragging every head that travels with it.
    fn step_main(&self, edge: Edge<State>, slots: &[Slot]) -> Edge<State> {
        let mut edge = edge.adv(MAIN);
        for (s, slot) in slots.iter().enumerate() {
            match slot {
                Slot::Traveling => edge = edge.adv(t_head(s)).adv(u_head(s)),
                Slot::Opened(_) => edge = edge.adv(u_head(s)),
                Slot::Parked(_) | Slot::Used => {}
            }
        }
        edge
    }

    fn expand(&self, s: &State) -> Vec<Edge<State>> {
        let State::At {
            pc,
            loops,
            ref slots,
            phase,
        } = *s
        else {
            return Vec::new();
        };
        let h = self.heads;
        let consumed = u64::MAX;
        let scan = |pc, loops, slots: Vec<Slot>| self.at(pc, loops, slots, Phase::Scan);
        match phase {
            Phase::Compare { slot, advanced } => {
                let t = t_head(slot);
                let mut out: Vec<Edge<State>> = self
                    .alphabet
                    .iter()
                    .map(|&c| {
                        let to = self.at(pc, loops, slots.clone(), Phase::Compare { slot, advanced: true });
                        self.step_main(Edge::new(h, to).sym(t, c).sym(MAIN, c).adv(t), slots)
                    })
                    .collect();
                out.push(Edge::new(h, self.at(pc, loops, slots.clone(), Phase::Verify { slot, advanced })));
                out
            }
            Phase::Verify { slot, advanced } => {
                let (t, u) = (t_head(slot), u_head(slot));
                let mut out = Vec::new();
                for &a in &self.alphabet {
                    for &b in &self.alphabet {
                        out.push(Edge::new(h, s.clone()).sym(t, a).sym(u, b).adv(t).adv(u));
                    }
                }
                let mut next = slots.clone();
                next[slot] = Slot::Used;
                let loops = if advanced { consumed } else { loops };
                out.push(
                    Edge::new(h, scan(pc + 1, loops, next))
                        .read(t, HeadRead::End)
                        .read(u, HeadRead::End),
                );
                out
            }
            Phase::Scan => match self.sk.ops[pc] {
                Op::Char(c) => {
                    let to = scan(pc + 1, consumed, slots.clone());
                    vec![self.step_main(Edge::new(h, to).sym(MAIN, c), slots)]
                }
                Op::Split(a, b) => vec![
                    Edge::new(h, scan(a, loops, slots.clone())),
                    Edge::new(h, scan(b, loops, slots.clone())),
                ],
                Op::Jmp(a) => vec![Edge::new(h, scan(a, loops, slots.clone()))],
                Op::Open(g) => {
                    if slots
                        .iter()
                        .any(|slot| matches!(slot, Slot::Opened(x) | Slot::Parked(x) if *x == g))
                    {
                        return Vec::new();
                    }
                    let eligible: Vec<usize> = (0..slots.len())
                        .filter(|&s| slots[s] == Slot::Traveling && self.sk.slot_groups[s].contains(&g))
                        .collect();
                    (0u64..1 << eligible.len())
                        .map(|choice| {
                            let mut next = slots.clone();
                            for (bit, &s) in eligible.iter().enumerate() {
                                if choice & (1 << bit) != 0 {
                                    next[s] = Slot::Opened(g);
                                }
                            }
                            Edge::new(h, scan(pc + 1, loops, next))
                        })
                        .collect()
                }
                Op::Close(g) => {
                    let next = slots
                        .iter()
                        .map(|&slot| if slot == Slot::Opened(g) { Slot::Parked(g) } else { slot })
                        .collect();
                    vec![Edge::new(h, scan(pc + 1, loops, next))]
                }
                Op::Ref { group, slot } => {
                    if slots[slot] != Slot::Parked(group) {
                        return Vec::new();
                    }
                    let to = self.at(pc, loops, slots.clone(), Phase::Compare { slot, advanced: false });
                    vec![Edge::new(h, to)]
                }
                Op::LoopEnter(l) => vec![Edge::new(h, scan(pc + 1, loops & !(1 << l), slots.clone()))],
                Op::LoopCheck(l) => {
                    if loops & (1 << l) == 0 {
                        Vec::new()
                    } else {
                        vec![Edge::new(h, scan(pc + 1, loops, slots.clone()))]
                    }
                }
                Op::Match => vec![Edge::new(h, State::Accept).read(MAIN, HeadRead::End)],
            },
        }
    }
}

/// Non-sensing machine over the expression's own literals.
pub fn compile_nonsensing(ast: &Ast) -> Result<MultiheadMachine, CompileError> {
    compile_nonsensing_over(ast, &BTreeSet::new())
}

/// Non-sensing machine whose alphabet also contains `extra`.
pub fn compile_nonsensing_over(ast: &Ast, extra: &BTreeSet<char>) -> Result<MultiheadMachine, CompileError> {
    validate(ast).map_err(CompileError::InvalidAst)?;
    let c = c_of(ast).finite().ok_or(CompileError::UnboundedOccurrences)?;
    if c > 20 {
        return Err(CompileError::TooLarge(format!("{c} reference occurrences")));
    }
    let sk = lower(ast)?;
    debug_assert_eq!(sk.slots as u64, c);
    let mut alphabet = literals_of(ast);
    alphabet.extend(extra);
    let heads = 2 * sk.slots + 1;
    let start_slots = vec![Slot::Traveling; sk.slots];
    let compiler = Compiler {
        sk,
        alphabet: alphabet.clone(),
        heads,
    };
    let start = compiler.at(0, 0, start_slots, Phase::Scan);
    let plan = Blueprint {
        name: "nonsensing".into(),
        heads,
        sensing: false,
        variant: Variant::Nonsensing,
        alphabet,
    };
    explore(ast, plan, start, |s| compiler.expand(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn machine(expr: &str) -> Result<MultiheadMachine, CompileError> {
        compile_nonsensing(&parse(expr).unwrap())
    }

    fn accepts(m: &MultiheadMachine, s: &str) -> bool {
        m.simulate(s).unwrap().accepted
    }

    #[test]
    fn double_word() {
        let m = machine(r"((a|b)*)\1").unwrap();
        assert_eq!(m.heads, 3);
        assert_eq!(m.validate(), Ok(()));
        assert!(accepts(&m, "abab"));
        assert!(accepts(&m, ""));
        assert!(!accepts(&m, "abaa"));
        assert!(!accepts(&m, "aba"));
    }

    #[test]
    fn head_count_and_errors() {
        assert_eq!(machine(r"((0))\1\1").unwrap().heads, 5);
        assert_eq!(machine(r"(a)(\1)*").unwrap_err(), CompileError::UnboundedOccurrences);
    }

    #[test]
    fn shared_slots_across_alternatives() {
        let m = machine(r"((a)|(b))(\2|\3)").unwrap();
        assert_eq!(m.heads, 3);
        assert!(accepts(&m, "aa"));
        assert!(accepts(&m, "bb"));
        assert!(!accepts(&m, "ab"));
    }

    #[test]
    fn recapture_in_loop() {
        let m = machine(r"((a|b))*\2").unwrap();
        assert!(accepts(&m, "abb"));
        assert!(!accepts(&m, "aba"));
        assert!(!accepts(&m, "a"));
    }
}
