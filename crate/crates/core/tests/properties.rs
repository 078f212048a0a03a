mod common;

use std::collections::BTreeSet;

use common::{all_strings, ast_strategy};
use prekit::backtrack::{enumerate_language, match_full, match_substring, wrap_matching};
use prekit::reductions::{intexpr_parse, slp_eq, slp_expand, slp_from_choice, IntExpr, DEFAULT_MAX_LEN};
use prekit::syntax::{c_of, concat_compose, shift_refs, union_compose, validate, Complexity};
use prekit::{parse, render, Ast};
use proptest::prelude::*;

const SPECIAL: [char; 8] = ['a', '0', '1', '#', '*', '(', '\\', '|'];

fn full(ast: &Ast, s: &str) -> bool {
    match_full(ast, s).unwrap().matched
}

/// `(index, byte offset, byte length)` of every reference in canonical text.
fn scan_refs(text: &str) -> Vec<(u32, usize, usize)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] != b'\\' {
            i += 1;
            continue;
        }
        let start = i;
        i += 1;
        if bytes[i] == b'{' {
            let close = i + text[i..].find('}').unwrap();
            out.push((text[i + 1..close].parse().unwrap(), start, close + 1 - start));
            i = close + 1;
        } else if bytes[i].is_ascii_digit() {
            let end = i + text[i..].find(|c: char| !c.is_ascii_digit()).unwrap_or(text.len() - i);
            out.push((text[i..end].parse().unwrap(), start, end - start));
            i = end;
        } else {
            i += 1;
        }
    }
    out
}

fn opens_before(text: &str, offset: usize) -> u32 {
    let bytes = text.as_bytes();
    let mut count = 0;
    let mut i = 0;
    while i < offset {
        match bytes[i] {
            b'\\' => i += 1,
            b'(' => count += 1,
            _ => {}
        }
        i += 1;
    }
    count
}

fn add_to_refs(text: &str, delta: u32) -> String {
    let mut out = String::new();
    let mut last = 0;
    for (k, start, len) in scan_refs(text) {
        out.push_str(&text[last..start]);
        out.push_str(&format!("\\{{{}}}", k + delta));
        last = start + len;
    }
    out.push_str(&text[last..]);
    out
}

fn intexpr_strategy() -> impl Strategy<Value = IntExpr> {
    let leaf = (0..1000u64).prop_map(IntExpr::Const);
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| IntExpr::sum(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| IntExpr::union(l, r)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_round_trip(ast in ast_strategy(SPECIAL.to_vec(), 12)) {
        let text = render(&ast);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &ast);
        prop_assert_eq!(render(&back), text);
    }

    #[test]
    fn complexity_laws(x in ast_strategy(vec!['a', 'b'], 3), y in ast_strategy(vec!['a', 'b'], 3)) {
        prop_assert_eq!(c_of(&Ast::Concat(vec![x.clone(), y.clone()])), c_of(&x) + c_of(&y));
        prop_assert_eq!(c_of(&Ast::union(x.clone(), y.clone())), c_of(&x).max(c_of(&y)));
        let star = c_of(&Ast::star(x.clone()));
        prop_assert!(star == Complexity::ZERO || star == Complexity::Omega);
        prop_assert_eq!(star == Complexity::ZERO, c_of(&x) == Complexity::ZERO);
    }

    #[test]
    fn validity_is_textual_precedence(ast in ast_strategy(vec!['a', '1'], 6)) {
        let text = render(&ast);
        let scan_ok = scan_refs(&text).iter().all(|&(k, start, _)| k <= opens_before(&text, start));
        prop_assert_eq!(validate(&ast).is_ok(), scan_ok, "{}", text);
    }

    #[test]
    fn shift_refs_is_additive(ast in ast_strategy(SPECIAL.to_vec(), 12), a in 0..20u32, b in 0..20u32) {
        prop_assert_eq!(shift_refs(&shift_refs(&ast, a), b), shift_refs(&ast, a + b));
        let rewritten = parse(&add_to_refs(&render(&ast), a)).unwrap();
        prop_assert_eq!(shift_refs(&ast, a), rewritten);
    }

    #[test]
    fn composition_languages(x in ast_strategy(vec!['a', 'b'], 2), y in ast_strategy(vec!['a', 'b'], 2)) {
        prop_assume!(validate(&x).is_ok() && validate(&y).is_ok());
        let cat = concat_compose(&[x.clone(), y.clone()]);
        let alt = union_compose(&[x.clone(), y.clone()]);
        prop_assert_eq!(c_of(&cat), c_of(&x) + c_of(&y));
        for s in all_strings(&['a', 'b'], 4) {
            let split = (0..=s.len()).any(|i| full(&x, &s[..i]) && full(&y, &s[i..]));
            prop_assert_eq!(full(&cat, &s), split, "{} on {:?}", render(&cat), s);
            prop_assert_eq!(full(&alt, &s), full(&x, &s) || full(&y, &s), "{} on {:?}", render(&alt), s);
        }
    }

    #[test]
    fn enumerator_agrees_with_matcher(ast in ast_strategy(vec!['a', 'b'], 2)) {
        prop_assume!(validate(&ast).is_ok());
        let lang = enumerate_language(&ast, 5).unwrap();
        for s in all_strings(&['a', 'b'], 5) {
            prop_assert_eq!(full(&ast, &s), lang.contains(&s), "{} on {:?}", render(&ast), s);
        }
    }

    #[test]
    fn wrapped_full_match_is_substring_match(ast in ast_strategy(vec!['a', 'b'], 2), s in "[ab]{0,7}") {
        prop_assume!(validate(&ast).is_ok());
        let wrapped = wrap_matching(&ast, &BTreeSet::from(['a', 'b']));
        prop_assert_eq!(full(&wrapped, &s), match_substring(&ast, &s).unwrap().is_some());
    }

    #[test]
    fn choices_derive_exactly_the_language(ast in ast_strategy(vec!['a', 'b'], 3)) {
        prop_assume!(validate(&ast).is_ok() && ast.is_star_free());
        let width = unions(&ast);
        prop_assume!(width <= 10);
        let mut derived = BTreeSet::new();
        for bits in 0..1u32 << width {
            let choice: Vec<u8> = (0..width).map(|i| (bits >> i & 1) as u8).collect();
            if let Ok((slp, _)) = slp_from_choice(&ast, &choice) {
                let word = slp_expand(&slp, DEFAULT_MAX_LEN).unwrap();
                prop_assert!(slp_eq(&slp, &slp).unwrap());
                derived.insert(word);
            }
        }
        prop_assert_eq!(derived, enumerate_language(&ast, 64).unwrap());
    }

    #[test]
    fn intexpr_text_round_trip(e in intexpr_strategy()) {
        prop_assert_eq!(intexpr_parse(&e.to_string()).unwrap(), e);
    }
}

/// Number of union nodes, an upper bound on the choice bytes any
/// derivation consumes.
fn unions(ast: &Ast) -> u32 {
    match ast {
        Ast::Union(l, r) => 1 + unions(l) + unions(r),
        Ast::Concat(items) => items.iter().map(unions).sum(),
        Ast::Star(c) | Ast::Plus(c) | Ast::Repeat(c, _) | Ast::Group(_, c) => unions(c),
        Ast::Literal(_) | Ast::Epsilon | Ast::Backref(_) => 0,
    }
}
