use std::collections::BTreeSet;
use std::fmt;

use super::{Ast, Complexity, GroupIndex};

/// A static problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `\index` with fewer than `index` groups opened before it.
    BadReference {
        index: GroupIndex,
        preceding_groups: u32,
    },
    /// Groups are not numbered `1..=G` in opening order.
    GroupNumbering {
        expected: GroupIndex,
        found: GroupIndex,
    },
    EmptyRepeat,
    GroupsUnderRepeat,
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::BadReference { .. } => "bad-reference",
            Violation::GroupNumbering { .. } => "group-numbering",
            Violation::EmptyRepeat => "empty-repeat",
            Violation::GroupsUnderRepeat => "groups-under-repeat",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadReference {
                index,
                preceding_groups,
            } => write!(
                f,
                "bad-reference: \\{index} is preceded by only {preceding_groups} group(s)"
            ),
            Violation::GroupNumbering { expected, found } => {
                write!(f, "group-numbering: expected group {expected}, found {found}")
            }
            Violation::EmptyRepeat => f.write_str("empty-repeat: repetition count must be positive"),
            Violation::GroupsUnderRepeat => {
                f.write_str("groups-under-repeat: repeated subexpression contains a group or reference")
            }
        }
    }
}

/// Check the textual validity rules. Never stops at the first problem.
pub fn validate(ast: &Ast) -> Result<(), Vec<Violation>> {
    fn walk(ast: &Ast, opened: &mut u32, out: &mut Vec<Violation>) {
        match ast {
            Ast::Literal(_) | Ast::Epsilon => {}
            Ast::Backref(k) => {
                if *k == 0 || *k > *opened {
                    out.push(Violation::BadReference {
                        index: *k,
                        preceding_groups: *opened,
                    });
                }
            }
            Ast::Group(i, child) => {
                *opened += 1;
                if *i != *opened {
                    out.push(Violation::GroupNumbering {
                        expected: *opened,
                        found: *i,
                    });
                }
                walk(child, opened, out);
            }
            Ast::Union(l, r) => {
                walk(l, opened, out);
                walk(r, opened, out);
            }
            Ast::Concat(items) => items.iter().for_each(|item| walk(item, opened, out)),
            Ast::Star(c) | Ast::Plus(c) => walk(c, opened, out),
            Ast::Repeat(c, n) => {
                if *n == 0 {
                    out.push(Violation::EmptyRepeat);
                }
                if c.has_captures() {
                    out.push(Violation::GroupsUnderRepeat);
                }
                walk(c, opened, out);
            }
        }
    }

    let mut out = Vec::new();
    walk(ast, &mut 0, &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

pub fn group_count(ast: &Ast) -> u32 {
    match ast {
        Ast::Literal(_) | Ast::Epsilon | Ast::Backref(_) => 0,
        Ast::Group(_, c) => 1 + group_count(c),
        Ast::Union(l, r) => group_count(l) + group_count(r),
        Ast::Concat(items) => items.iter().map(group_count).sum(),
        Ast::Star(c) | Ast::Plus(c) | Ast::Repeat(c, _) => group_count(c),
    }
}

fn map_indices(ast: &Ast, group: &impl Fn(GroupIndex) -> GroupIndex, reference: &impl Fn(GroupIndex) -> GroupIndex) -> Ast {
    match ast {
        Ast::Literal(_) | Ast::Epsilon => ast.clone(),
        Ast::Backref(k) => Ast::Backref(reference(*k)),
        Ast::Group(i, c) => Ast::group(group(*i), map_indices(c, group, reference)),
        Ast::Union(l, r) => Ast::union(
            map_indices(l, group, reference),
            map_indices(r, group, reference),
        ),
        Ast::Concat(items) => Ast::Concat(
            items
                .iter()
                .map(|item| map_indices(item, group, reference))
                .collect(),
        ),
        Ast::Star(c) => Ast::star(map_indices(c, group, reference)),
        Ast::Plus(c) => Ast::plus(map_indices(c, group, reference)),
        Ast::Repeat(c, n) => Ast::repeat(map_indices(c, group, reference), *n),
    }
}

/// Add `delta` to every backreference. Group indices are left alone.
pub fn shift_refs(ast: &Ast, delta: u32) -> Ast {
    map_indices(ast, &|i| i, &|k| k + delta)
}

/// Move a self-contained part `offset` groups to the right: its groups and
/// the references that point at its own groups shift; references beyond
/// its own group count address earlier parts and stay as they are.
fn relocate(ast: &Ast, offset: u32) -> Ast {
    if offset == 0 {
        return ast.clone();
    }
    let own = group_count(ast);
    map_indices(ast, &|i| i + offset, &|k| if k <= own { k + offset } else { k })
}

/// Concatenate independently numbered parts into one expression.
///
/// Each part's groups and internal references are shifted by the number of
/// groups in the parts before it. A reference whose index exceeds its own
/// part's group count is taken to address an earlier part and is kept
/// verbatim. A part that is a bare union is put in a fresh group first so
/// that the result still renders as the intended concatenation.
pub fn concat_compose(parts: &[Ast]) -> Ast {
    let mut items = Vec::new();
    let mut offset = 0;
    for part in parts {
        let part = match part {
            Ast::Union(..) => wrap_group(part),
            _ => part.clone(),
        };
        let groups = group_count(&part);
        match relocate(&part, offset) {
            Ast::Epsilon => {}
            Ast::Concat(children) => items.extend(children),
            other => items.push(other),
        }
        offset += groups;
    }
    Ast::concat(items)
}

/// Union of independently numbered alternatives, renumbered like
/// [`concat_compose`] and flattened into one left-nested alternation.
pub fn union_compose(parts: &[Ast]) -> Ast {
    fn branches(ast: Ast, out: &mut Vec<Ast>) {
        match ast {
            Ast::Union(l, r) => {
                branches(*l, out);
                branches(*r, out);
            }
            other => out.push(other),
        }
    }

    let mut alternatives = Vec::new();
    let mut offset = 0;
    for part in parts {
        branches(relocate(part, offset), &mut alternatives);
        offset += group_count(part);
    }
    Ast::alternation(alternatives)
}

/// Enclose `ast` in a new outermost group; the new group becomes number 1
/// and everything inside moves up by one.
pub fn wrap_group(ast: &Ast) -> Ast {
    Ast::group(1, relocate(ast, 1))
}

pub fn c_of(ast: &Ast) -> Complexity {
    match ast {
        Ast::Backref(_) => Complexity::Finite(1),
        Ast::Literal(_) | Ast::Epsilon => Complexity::ZERO,
        Ast::Union(l, r) => c_of(l).max(c_of(r)),
        Ast::Concat(items) => items.iter().map(c_of).fold(Complexity::ZERO, |a, b| a + b),
        Ast::Star(c) | Ast::Plus(c) => {
            if c_of(c) == Complexity::ZERO {
                Complexity::ZERO
            } else {
                Complexity::Omega
            }
        }
        Ast::Repeat(c, n) => c_of(c).times(u64::from(*n)),
        Ast::Group(_, c) => c_of(c),
    }
}

/// Indices that occur in some backreference.
pub fn referenced_vars(ast: &Ast) -> BTreeSet<GroupIndex> {
    fn walk(ast: &Ast, out: &mut BTreeSet<GroupIndex>) {
        match ast {
            Ast::Backref(k) => {
                out.insert(*k);
            }
            Ast::Literal(_) | Ast::Epsilon => {}
            Ast::Union(l, r) => {
                walk(l, out);
                walk(r, out);
            }
            Ast::Concat(items) => items.iter().for_each(|item| walk(item, out)),
            Ast::Star(c) | Ast::Plus(c) | Ast::Repeat(c, _) | Ast::Group(_, c) => walk(c, out),
        }
    }
    let mut out = BTreeSet::new();
    walk(ast, &mut out);
    out
}

pub fn literals_of(ast: &Ast) -> BTreeSet<char> {
    fn walk(ast: &Ast, out: &mut BTreeSet<char>) {
        match ast {
            Ast::Literal(c) => {
                out.insert(*c);
            }
            Ast::Backref(_) | Ast::Epsilon => {}
            Ast::Union(l, r) => {
                walk(l, out);
                walk(r, out);
            }
            Ast::Concat(items) => items.iter().for_each(|item| walk(item, out)),
            Ast::Star(c) | Ast::Plus(c) | Ast::Repeat(c, _) | Ast::Group(_, c) => walk(c, out),
        }
    }
    let mut out = BTreeSet::new();
    walk(ast, &mut out);
    out
}
