//! Control skeleton shared by both compilers: the expression flattened into
//! a jump program whose capture and reference steps are left for the
//! compilers to interpret with heads.

use std::collections::BTreeSet;

use super::CompileError;
use crate::syntax::{Ast, GroupIndex};

/// Upper bound on skeleton length.
pub const MAX_OPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Op {
    Char(char),
    Split(usize, usize),
    Jmp(usize),
    Open(GroupIndex),
    Close(GroupIndex),
    /// A reference occurrence and the head slot assigned to it.
    Ref { group: GroupIndex, slot: usize },
    LoopEnter(usize),
    LoopCheck(usize),
    Match,
}

pub(crate) struct Skeleton {
    pub ops: Vec<Op>,
    /// Per op, the loops whose body contains it.
    pub enclosing: Vec<u64>,
    pub slots: usize,
    /// Per slot, the groups referenced by occurrences sharing it.
    pub slot_groups: Vec<BTreeSet<GroupIndex>>,
}

struct Lowering {
    ops: Vec<Op>,
    enclosing: Vec<u64>,
    active: u64,
    loops: usize,
    slot_groups: Vec<BTreeSet<GroupIndex>>,
}

impl Lowering {
    fn emit(&mut self, op: Op) -> Result<usize, CompileError> {
        if self.ops.len() >= MAX_OPS {
            return Err(CompileError::TooLarge(format!("more than {MAX_OPS} skeleton steps")));
        }
        self.ops.push(op);
        self.enclosing.push(self.active);
        Ok(self.ops.len() - 1)
    }

    /// Lowers `ast` using slots from `base` on; returns the first slot left
    /// unused. Alternatives share slots since only one of them runs.
    fn lower(&mut self, ast: &Ast, base: usize) -> Result<usize, CompileError> {
        Ok(match ast {
            Ast::Literal(c) => {
                self.emit(Op::Char(*c))?;
                base
            }
            Ast::Epsilon => base,
            Ast::Concat(items) => {
                let mut next = base;
                for item in items {
                    next = self.lower(item, next)?;
                }
                next
            }
            Ast::Union(l, r) => {
                let split = self.emit(Op::Split(0, 0))?;
                let left = self.lower(l, base)?;
                let jmp = self.emit(Op::Jmp(0))?;
                let right_start = self.ops.len();
                let right = self.lower(r, base)?;
                let end = self.ops.len();
                self.ops[split] = Op::Split(split + 1, right_start);
                self.ops[jmp] = Op::Jmp(end);
                left.max(right)
            }
            Ast::Star(c) => self.star(c, base)?,
            Ast::Plus(c) => {
                let next = self.lower(c, base)?;
                self.star(c, next)?
            }
            Ast::Repeat(c, n) => {
                let mut next = base;
                for _ in 0..*n {
                    next = self.lower(c, next)?;
                }
                next
            }
            Ast::Group(g, c) => {
                self.emit(Op::Open(*g))?;
                let next = self.lower(c, base)?;
                self.emit(Op::Close(*g))?;
                next
            }
            Ast::Backref(g) => {
                if self.slot_groups.len() <= base {
                    self.slot_groups.resize(base + 1, BTreeSet::new());
                }
                self.slot_groups[base].insert(*g);
                self.emit(Op::Ref {
                    group: *g,
                    slot: base,
                })?;
                base + 1
            }
        })
    }

    fn star(&mut self, body: &Ast, base: usize) -> Result<usize, CompileError> {
        let l = self.loops;
        if l >= 64 {
            return Err(CompileError::TooLarge("more than 64 loops".into()));
        }
        self.loops += 1;
        let head = self.emit(Op::Split(0, 0))?;
        let saved = self.active;
        self.active |= 1 << l;
        self.emit(Op::LoopEnter(l))?;
        let next = self.lower(body, base)?;
        self.emit(Op::LoopCheck(l))?;
        self.emit(Op::Jmp(head))?;
        self.active = saved;
        let exit = self.ops.len();
        self.ops[head] = Op::Split(head + 1, exit);
        Ok(next)
    }
}

pub(crate) fn lower(ast: &Ast) -> Result<Skeleton, CompileError> {
    let mut l = Lowering {
        ops: Vec::new(),
        enclosing: Vec::new(),
        active: 0,
        loops: 0,
        slot_groups: Vec::new(),
    };
    let slots = l.lower(ast, 0)?;
    l.emit(Op::Match)?;
    l.slot_groups.resize(slots, BTreeSet::new());
    Ok(Skeleton {
        ops: l.ops,
        enclosing: l.enclosing,
        slots,
        slot_groups: l.slot_groups,
    })
}
