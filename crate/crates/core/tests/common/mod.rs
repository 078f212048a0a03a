//! Shared proptest strategies.

#![allow(dead_code)]

use prekit::Ast;
use proptest::prelude::*;

/// Expressions in the canonical shape produced by the parser, over the
/// given literals. Groups are numbered in opening order; references pick
/// any index in `1..=max_ref` (0 disables references).
pub fn ast_strategy(literals: Vec<char>, max_ref: u32) -> impl Strategy<Value = Ast> {
    let lit = proptest::sample::select(literals).prop_map(Ast::Literal);
    let atom_leaf = if max_ref == 0 {
        lit.clone().boxed()
    } else {
        prop_oneof![3 => lit.clone(), 1 => (1..=max_ref).prop_map(Ast::Backref)].boxed()
    };
    let leaf = factor(atom_leaf.clone(), lit.clone());
    let alternation = leaf.prop_recursive(4, 24, 4, move |inner| {
        let atom = prop_oneof![2 => atom_leaf.clone(), 1 => inner.prop_map(|a| Ast::group(0, a))].boxed();
        let concat = proptest::collection::vec(factor(atom, lit.clone()), 0..4).prop_map(Ast::concat);
        proptest::collection::vec(concat, 1..3).prop_map(Ast::alternation)
    });
    alternation.prop_map(renumber)
}

fn factor(atom: BoxedStrategy<Ast>, lit: impl Strategy<Value = Ast> + Clone + 'static) -> BoxedStrategy<Ast> {
    prop_oneof![
        5 => atom.clone(),
        2 => atom.clone().prop_map(Ast::star),
        1 => atom.prop_map(Ast::plus),
        1 => (lit, 1..4u32).prop_map(|(l, n)| Ast::repeat(l, n)),
    ]
    .boxed()
}

/// Number groups `1..=G` in pre-order, which is their opening order.
pub fn renumber(ast: Ast) -> Ast {
    fn go(ast: Ast, next: &mut u32) -> Ast {
        match ast {
            Ast::Group(_, c) => {
                *next += 1;
                let g = *next;
                Ast::group(g, go(*c, next))
            }
            Ast::Union(l, r) => {
                let l = go(*l, next);
                Ast::union(l, go(*r, next))
            }
            Ast::Concat(items) => Ast::Concat(items.into_iter().map(|i| go(i, next)).collect()),
            Ast::Star(c) => Ast::star(go(*c, next)),
            Ast::Plus(c) => Ast::plus(go(*c, next)),
            Ast::Repeat(c, n) => Ast::repeat(go(*c, next), n),
            leaf => leaf,
        }
    }
    go(ast, &mut 0)
}

pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
