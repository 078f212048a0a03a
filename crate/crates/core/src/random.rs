//! Random well-formed expressions and subjects for differential testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::reductions::{CnfFormula, IntExpr, Lit};
use crate::syntax::{parse, referenced_vars, render, Ast};

#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub alphabet: Vec<char>,
    pub max_rendered_len: usize,
    pub max_referenced: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            alphabet: vec!['a', 'b'],
            max_rendered_len: 12,
            max_referenced: 2,
        }
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    spec: &'a RandomSpec,
    groups: u32,
}

impl<R: Rng> Gen<'_, R> {
    fn alternation(&mut self, depth: u32) -> Ast {
        let n = if depth > 0 && self.rng.gen_bool(0.25) { 2 } else { 1 };
        let mut out = self.concat(depth);
        for _ in 1..n {
            out = Ast::union(out, self.concat(depth));
        }
        out
    }

    fn concat(&mut self, depth: u32) -> Ast {
        let n = self.rng.gen_range(0..=3);
        Ast::concat((0..n).map(|_| self.factor(depth)).collect())
    }

    fn factor(&mut self, depth: u32) -> Ast {
        let atom = self.atom(depth);
        match self.rng.gen_range(0..10) {
            0..=1 => Ast::star(atom),
            2 => Ast::plus(atom),
            3 if !atom.has_captures() => Ast::repeat(atom, self.rng.gen_range(1..=3)),
            _ => atom,
        }
    }

    fn atom(&mut self, depth: u32) -> Ast {
        match self.rng.gen_range(0..10) {
            0..=4 => Ast::lit(*self.spec.alphabet.choose(self.rng).expect("non-empty alphabet")),
            5..=7 if depth > 0 => {
                self.groups += 1;
                let g = self.groups;
                Ast::group(g, self.alternation(depth - 1))
            }
            _ if self.groups > 0 => Ast::Backref(self.rng.gen_range(1..=self.groups)),
            _ => Ast::lit(*self.spec.alphabet.choose(self.rng).expect("non-empty alphabet")),
        }
    }
}

/// A valid expression in canonical form meeting the size limits of `spec`.
pub fn random_expression(rng: &mut impl Rng, spec: &RandomSpec) -> Ast {
    loop {
        let mut g = Gen { rng, spec, groups: 0 };
        let ast = g.alternation(3);
        let text = render(&ast);
        if text.chars().count() <= spec.max_rendered_len
            && referenced_vars(&ast).len() <= spec.max_referenced
            && parse(&text).as_ref() == Ok(&ast)
        {
            return ast;
        }
    }
}

pub fn random_subject(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).expect("non-empty alphabet")).collect()
}

/// A 3-CNF formula with `1..=max_vars` variables and `0..=max_clauses`
/// clauses.
pub fn random_cnf(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(0..=max_clauses);
    let mut lit = || Lit {
        var: rng.gen_range(1..=n),
        positive: rng.gen_bool(0.5),
    };
    let clauses = (0..m).map(|_| [lit(), lit(), lit()]).collect();
    CnfFormula::new(n, clauses).expect("literals in range")
}

/// An integer expression of depth at most `max_depth` with constants
/// below `const_bound`.
pub fn random_intexpr(rng: &mut impl Rng, max_depth: usize, const_bound: u64) -> IntExpr {
    if max_depth == 0 || rng.gen_bool(0.3) {
        return IntExpr::Const(rng.gen_range(0..const_bound));
    }
    let l = random_intexpr(rng, max_depth - 1, const_bound);
    let r = random_intexpr(rng, max_depth - 1, const_bound);
    if rng.gen_bool(0.5) {
        IntExpr::sum(l, r)
    } else {
        IntExpr::union(l, r)
    }
}
