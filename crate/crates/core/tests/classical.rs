//! Reference-free expressions against a position automaton built from
//! first/last/follow sets.

mod common;

use std::collections::BTreeSet;

use common::{all_strings, ast_strategy};
use prekit::backtrack::match_full;
use prekit::{render, Ast};
use proptest::prelude::*;

struct Glushkov {
    symbols: Vec<char>,
    follow: Vec<BTreeSet<usize>>,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
    nullable: bool,
}

struct Info {
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
    nullable: bool,
}

impl Glushkov {
    fn new(ast: &Ast) -> Self {
        let mut g = Glushkov {
            symbols: Vec::new(),
            follow: Vec::new(),
            first: BTreeSet::new(),
            last: BTreeSet::new(),
            nullable: false,
        };
        let info = g.build(ast);
        g.first = info.first;
        g.last = info.last;
        g.nullable = info.nullable;
        g
    }

    fn link(&mut self, from: &BTreeSet<usize>, to: &BTreeSet<usize>) {
        for &p in from {
            self.follow[p].extend(to);
        }
    }

    fn build(&mut self, ast: &Ast) -> Info {
        match ast {
            Ast::Literal(c) => {
                let p = self.symbols.len();
                self.symbols.push(*c);
                self.follow.push(BTreeSet::new());
                Info {
                    first: BTreeSet::from([p]),
                    last: BTreeSet::from([p]),
                    nullable: false,
                }
            }
            Ast::Epsilon => Info {
                first: BTreeSet::new(),
                last: BTreeSet::new(),
                nullable: true,
            },
            Ast::Group(_, c) => self.build(c),
            Ast::Union(l, r) => {
                let (l, r) = (self.build(l), self.build(r));
                Info {
                    first: &l.first | &r.first,
                    last: &l.last | &r.last,
                    nullable: l.nullable || r.nullable,
                }
            }
            Ast::Concat(items) => {
                let mut acc = self.build(&Ast::Epsilon);
                for item in items {
                    let next = self.build(item);
                    self.link(&acc.last, &next.first);
                    acc = Info {
                        first: if acc.nullable { &acc.first | &next.first } else { acc.first },
                        last: if next.nullable { &acc.last | &next.last } else { next.last },
                        nullable: acc.nullable && next.nullable,
                    };
                }
                acc
            }
            Ast::Star(c) | Ast::Plus(c) => {
                let inner = self.build(c);
                self.link(&inner.last, &inner.first);
                Info {
                    nullable: matches!(ast, Ast::Star(_)) || inner.nullable,
                    ..inner
                }
            }
            Ast::Repeat(c, n) => self.build(&Ast::Concat(vec![(**c).clone(); *n as usize])),
            Ast::Backref(_) => panic!("position automaton needs a reference-free expression"),
        }
    }

    fn accepts(&self, s: &str) -> bool {
        let mut current: Option<BTreeSet<usize>> = None;
        for c in s.chars() {
            let candidates = match &current {
                None => self.first.clone(),
                Some(set) => set.iter().flat_map(|&p| self.follow[p].iter().copied()).collect(),
            };
            current = Some(candidates.into_iter().filter(|&p| self.symbols[p] == c).collect());
        }
        match current {
            None => self.nullable,
            Some(set) => set.iter().any(|p| self.last.contains(p)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matcher_agrees_with_position_automaton(ast in ast_strategy(vec!['a', 'b'], 0)) {
        let automaton = Glushkov::new(&ast);
        for s in all_strings(&['a', 'b'], 8) {
            prop_assert_eq!(
                match_full(&ast, &s).unwrap().matched,
                automaton.accepts(&s),
                "{} on {:?}", render(&ast), s
            );
        }
    }
}

#[test]
fn position_automaton_examples() {
    let ast = prekit::parse("(a|b)*abb").unwrap();
    let g = Glushkov::new(&ast);
    assert!(g.accepts("abb") && g.accepts("babb"));
    assert!(!g.accepts("ab") && !g.accepts(""));
}
