//! Hand-built machines: block-length divisibility checks and their
//! combination into a checker for `a^i b a^(i+1) b a^k` with `i` and `i+1`
//! both dividing `k`.

use std::collections::{BTreeSet, HashMap};

use super::{HeadRead, MultiheadMachine, Provenance, Transition};

/// Which first-block-derived length must divide the last block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divisor {
    /// `d = i`, the length of the first block.
    First,
    /// `d = i + 1`, the length of the middle block.
    Middle,
}

struct Builder {
    heads: usize,
    states: Vec<String>,
    index: HashMap<String, usize>,
    transitions: Vec<Transition>,
}

impl Builder {
    fn new(heads: usize) -> Self {
        Builder {
            heads,
            states: Vec::new(),
            index: HashMap::new(),
            transitions: Vec::new(),
        }
    }

    fn state(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.states.push(name.to_owned());
        self.index.insert(name.to_owned(), self.states.len() - 1);
        self.states.len() - 1
    }

    fn rule(
        &mut self,
        from: &str,
        reads: &[(usize, HeadRead)],
        eq: &[(usize, usize)],
        neq: &[(usize, usize)],
        to: &str,
        advance: &[usize],
    ) {
        let from = self.state(from);
        let to = self.state(to);
        let mut r = vec![HeadRead::Any; self.heads];
        for &(h, read) in reads {
            r[h] = read;
        }
        let mut a = vec![0; self.heads];
        for &h in advance {
            a[h] = 1;
        }
        self.transitions.push(Transition {
            from,
            reads: r,
            eq: eq.to_vec(),
            neq: neq.to_vec(),
            to,
            advance: a,
        });
    }
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

fn sym(c: char) -> HeadRead {
    HeadRead::Symbol(c)
}

/// Deterministic 3-head sensing machine accepting `a^i b a^(i+1) b a^k`
/// with `i > 0`, `k > 0` and `d | k`, where `d` is selected by `divisor`.
///
/// Head B is placed `d` cells ahead of head A by walking them together over
/// the first blocks. Both then move in lockstep over the last block; head C
/// marks where B stood at the start of each hop, and a hop ends when A
/// reaches C. `k` is a multiple of `d` exactly when B lands on the
/// end-marker at a hop boundary.
pub fn divisibility_machine(divisor: Divisor) -> MultiheadMachine {
    let mut b = Builder::new(3);
    let a = sym('a');
    let bb = sym('b');
    b.state("scan");

    match divisor {
        Divisor::First => {
            b.rule("scan", &[(B, a)], &[], &[], "scan", &[B]);
            b.rule("scan", &[(B, bb)], &[], &[], "lock_first", &[]);
            b.rule("lock_first", &[(A, a), (B, bb)], &[], &[], "lock", &[A, B]);
        }
        Divisor::Middle => {
            b.rule("scan", &[(B, a)], &[], &[], "scan", &[B]);
            b.rule("scan", &[(B, bb)], &[], &[], "lock_first", &[B]);
            b.rule("lock_first", &[(A, a), (B, a)], &[], &[], "lock", &[A, B]);
        }
    }
    b.rule("lock", &[(A, a), (B, a)], &[], &[], "lock", &[A, B]);
    b.rule("lock", &[(A, bb), (B, a)], &[], &[], "catch", &[]);

    // C catches up with B, then checks the rest of the middle block and
    // the second separator.
    b.rule("catch", &[], &[], &[(C, B)], "catch", &[C]);
    match divisor {
        Divisor::First => {
            b.rule("catch", &[(C, a)], &[(C, B)], &[], "tail_a", &[C]);
            b.rule("tail_a", &[(C, a)], &[], &[], "tail_b", &[C]);
        }
        Divisor::Middle => {
            b.rule("catch", &[(C, a)], &[(C, B)], &[], "tail_b", &[C]);
        }
    }
    b.rule("tail_b", &[(C, bb)], &[], &[], "setup", &[C]);

    // Move A onto the start of the last block, carrying B along; B must
    // cross the second separator on the way.
    b.rule("setup", &[(B, a)], &[], &[(A, C)], "setup", &[A, B]);
    b.rule("setup", &[(B, bb)], &[], &[(A, C)], "setup_past", &[A, B]);
    b.rule("setup_past", &[(B, a)], &[], &[(A, C)], "setup_past", &[A, B]);
    b.rule("setup_past", &[(A, a)], &[(A, C)], &[], "hop", &[]);

    // One hop per multiple of d.
    b.rule("hop", &[(B, HeadRead::End)], &[], &[], "accept", &[]);
    b.rule("hop", &[(B, a)], &[], &[], "mark", &[]);
    b.rule("mark", &[], &[], &[(C, B)], "mark", &[C]);
    b.rule("mark", &[], &[(C, B)], &[], "step", &[]);
    b.rule("step", &[(B, a)], &[], &[(A, C)], "step", &[A, B]);
    b.rule("step", &[], &[(A, C)], &[], "hop", &[]);

    let accept = b.state("accept");
    let name = match divisor {
        Divisor::First => "divides_first",
        Divisor::Middle => "divides_middle",
    };
    MultiheadMachine {
        name: name.into(),
        heads: 3,
        sensing: true,
        alphabet: BTreeSet::from(['a', 'b']),
        states: b.states,
        initial: 0,
        accepting: BTreeSet::from([accept]),
        transitions: b.transitions,
        provenance: None,
    }
}

/// Runs `first`, and from any of its accepting states hands control to
/// `second`, whose heads are still on the first cell. Accepts the
/// intersection of the two languages using the sum of the head counts.
pub fn sequential_intersection(
    first: &MultiheadMachine,
    second: &MultiheadMachine,
    name: &str,
) -> MultiheadMachine {
    let heads = first.heads + second.heads;
    let offset = first.states.len();
    let mut states: Vec<String> = first.states.iter().map(|s| format!("1.{s}")).collect();
    states.extend(second.states.iter().map(|s| format!("2.{s}")));

    let widen = |t: &Transition, shift: usize, state_shift: usize| {
        let mut reads = vec![HeadRead::Any; heads];
        let mut advance = vec![0; heads];
        reads[shift..shift + t.reads.len()].copy_from_slice(&t.reads);
        advance[shift..shift + t.advance.len()].copy_from_slice(&t.advance);
        let pairs = |v: &[(usize, usize)]| v.iter().map(|&(i, j)| (i + shift, j + shift)).collect();
        Transition {
            from: t.from + state_shift,
            reads,
            eq: pairs(&t.eq),
            neq: pairs(&t.neq),
            to: t.to + state_shift,
            advance,
        }
    };

    let mut transitions: Vec<Transition> = first
        .transitions
        .iter()
        .filter(|t| !first.accepting.contains(&t.from))
        .map(|t| widen(t, 0, 0))
        .collect();
    for &acc in &first.accepting {
        transitions.push(Transition {
            from: acc,
            reads: vec![HeadRead::Any; heads],
            eq: vec![],
            neq: vec![],
            to: second.initial + offset,
            advance: vec![0; heads],
        });
    }
    transitions.extend(second.transitions.iter().map(|t| widen(t, first.heads, offset)));

    MultiheadMachine {
        name: name.into(),
        heads,
        sensing: first.sensing || second.sensing,
        alphabet: first.alphabet.union(&second.alphabet).copied().collect(),
        states,
        initial: first.initial,
        accepting: second.accepting.iter().map(|&s| s + offset).collect(),
        transitions,
        provenance: None,
    }
}

/// Sensing machine for `{ a^i b a^(i+1) b a^k : i, k > 0, i | k, (i+1) | k }`,
/// built from two 3-head divisibility checks.
pub fn s_checker_machine() -> MultiheadMachine {
    let mut m = sequential_intersection(
        &divisibility_machine(Divisor::First),
        &divisibility_machine(Divisor::Middle),
        "s_checker",
    );
    m.provenance = Some(Provenance {
        source: "a^i b a^(i+1) b a^k, i(i+1) | k".into(),
        variant: "sensing".into(),
    });
    m
}
