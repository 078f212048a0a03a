//! Named example languages, each with a direct membership test, and a
//! bounded equivalence sweep for unary expressions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::backtrack::{Backtracker, MatchError};
use crate::syntax::{literals_of, parse, union_compose, Ast};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("unknown witness {0:?}")]
    UnknownName(String),
    #[error("lb needs b >= 1")]
    BadParameter,
    #[error("repeated-symbol needs a non-empty alphabet")]
    EmptyAlphabet,
    #[error("expressions use more than one symbol: {0:?}")]
    NonUnary(BTreeSet<char>),
    #[error(transparent)]
    Match(#[from] MatchError),
}

fn fixed(text: &str) -> Ast {
    parse(text).expect("built-in expression parses")
}

/// `((a|b)*)\1`: words of the form `ww`.
pub fn gen_double_word() -> Ast {
    fixed(r"((a|b)*)\1")
}

pub fn double_word_member(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    let half = chars.len() / 2;
    chars.len().is_multiple_of(2) && chars[..half] == chars[half..] && chars.iter().all(|c| matches!(c, 'a' | 'b'))
}

/// `(Σ)*(Σ)(Σ)*\2(Σ)*`: some symbol occurs twice.
pub fn gen_repeated_symbol(alphabet: &[char]) -> Result<Ast, WitnessError> {
    let sigma: BTreeSet<char> = alphabet.iter().copied().collect();
    if sigma.is_empty() {
        return Err(WitnessError::EmptyAlphabet);
    }
    let any = |g| Ast::group(g, Ast::alternation(sigma.iter().map(|&c| Ast::lit(c))));
    Ok(Ast::Concat(vec![
        Ast::star(any(1)),
        any(2),
        Ast::star(any(3)),
        Ast::Backref(2),
        Ast::star(any(4)),
    ]))
}

pub fn repeated_symbol_member(s: &str, alphabet: &[char]) -> bool {
    let mut seen = BTreeSet::new();
    let mut repeated = false;
    for c in s.chars() {
        if !alphabet.contains(&c) {
            return false;
        }
        repeated |= !seen.insert(c);
    }
    repeated
}

/// `w_1#…#w_b#w_b#…#w_1` over `{0,1}`, using `b` referenced groups.
pub fn gen_lb(b: u32) -> Result<Ast, WitnessError> {
    if b == 0 {
        return Err(WitnessError::BadParameter);
    }
    let bit = || Ast::union(Ast::lit('0'), Ast::lit('1'));
    let mut items = Vec::new();
    for j in 1..=b {
        items.push(Ast::group(2 * j - 1, Ast::star(Ast::group(2 * j, bit()))));
        items.push(Ast::lit('#'));
    }
    for j in (2..=b).rev() {
        items.push(Ast::Backref(2 * j - 1));
        items.push(Ast::lit('#'));
    }
    items.push(Ast::Backref(1));
    Ok(Ast::Concat(items))
}

pub fn lb_member(s: &str, b: u32) -> bool {
    let blocks: Vec<&str> = s.split('#').collect();
    let n = 2 * b as usize;
    blocks.len() == n
        && blocks.iter().all(|w| w.chars().all(|c| c == '0' || c == '1'))
        && (0..n).all(|i| blocks[i] == blocks[n - 1 - i])
}

/// `((0|1)*)#(0|1)*\1(0|1)*`: a pattern, `#`, and a text containing it.
pub fn gen_match_lang() -> Ast {
    fixed(r"((0|1)*)#(0|1)*\1(0|1)*")
}

pub fn match_lang_member(s: &str) -> bool {
    let Some((pattern, text)) = s.split_once('#') else {
        return false;
    };
    let binary = |w: &str| w.chars().all(|c| c == '0' || c == '1');
    binary(pattern) && binary(text) && text.contains(pattern)
}

/// Lengths with their own branch in the third expression.
pub const FERMAT_LENGTHS: [u32; 8] = [0, 1, 2, 3, 5, 17, 257, 65537];

/// The three unary expressions built around Fermat primes. The third one
/// is equivalent to `a*` exactly when no Fermat prime exists beyond the
/// five known ones.
pub fn gen_fermat() -> (Ast, Ast, Ast) {
    let a1 = fixed(r"((aa)+a)\1*a");
    let a2 = fixed(r"(a+a)\1+");
    let mut parts = vec![a1.clone(), a2.clone()];
    parts.extend(FERMAT_LENGTHS.iter().map(|&n| match n {
        0 => Ast::Epsilon,
        1 => Ast::lit('a'),
        n => Ast::repeat(Ast::lit('a'), n),
    }));
    (a1, a2, union_compose(&parts))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `n >= 4` and `n - 1` is not a power of two.
pub fn fermat_a1_member(n: u64) -> bool {
    n >= 4 && !(n - 1).is_power_of_two()
}

pub fn fermat_a2_member(n: u64) -> bool {
    n >= 4 && !is_prime(n)
}

/// Whether `a^n` is in the language of the third expression.
pub fn fermat_oracle(n: u64) -> bool {
    let fermat_prime = is_prime(n) && (n - 1).is_power_of_two();
    !fermat_prime || FERMAT_LENGTHS.iter().any(|&k| u64::from(k) == n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryComparison {
    EqualUpTo(u64),
    /// Least length on which the two expressions disagree.
    FirstDifference { n: u64, left: bool, right: bool },
}

impl fmt::Display for UnaryComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnaryComparison::EqualUpTo(b) => write!(f, "equal up to {b}"),
            UnaryComparison::FirstDifference { n, left, right } => {
                write!(f, "first difference at length {n} (left {left}, right {right})")
            }
        }
    }
}

/// Compares two single-letter expressions on every length up to `bound`.
pub fn bounded_unary_eq(a: &Ast, b: &Ast, bound: u64) -> Result<UnaryComparison, WitnessError> {
    let mut symbols = literals_of(a);
    symbols.extend(literals_of(b));
    if symbols.len() > 1 {
        return Err(WitnessError::NonUnary(symbols));
    }
    let letter = symbols.into_iter().next().unwrap_or('a');
    let left = Backtracker::new(a)?;
    let right = Backtracker::new(b)?;
    let mut subject = Vec::new();
    for n in 0..=bound {
        let l = left.match_full(&subject)?.matched;
        let r = right.match_full(&subject)?.matched;
        if l != r {
            return Ok(UnaryComparison::FirstDifference { n, left: l, right: r });
        }
        subject.push(letter);
    }
    Ok(UnaryComparison::EqualUpTo(bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessName {
    DoubleWord,
    RepeatedSymbol,
    Lb,
    MatchLang,
    FermatA1,
    FermatA2,
    FermatA3,
}

impl WitnessName {
    pub const ALL: [WitnessName; 7] = [
        WitnessName::DoubleWord,
        WitnessName::RepeatedSymbol,
        WitnessName::Lb,
        WitnessName::MatchLang,
        WitnessName::FermatA1,
        WitnessName::FermatA2,
        WitnessName::FermatA3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WitnessName::DoubleWord => "double-word",
            WitnessName::RepeatedSymbol => "repeated-symbol",
            WitnessName::Lb => "lb",
            WitnessName::MatchLang => "match-lang",
            WitnessName::FermatA1 => "fermat-a1",
            WitnessName::FermatA2 => "fermat-a2",
            WitnessName::FermatA3 => "fermat-a3",
        }
    }
}

impl FromStr for WitnessName {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WitnessName::ALL
            .into_iter()
            .find(|w| w.as_str() == s)
            .ok_or_else(|| WitnessError::UnknownName(s.to_owned()))
    }
}

impl fmt::Display for WitnessName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A witness together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSpec {
    pub name: WitnessName,
    /// Number of blocks for `lb`.
    pub b: u32,
    /// Alphabet for `repeated-symbol`.
    pub alphabet: Vec<char>,
}

impl WitnessSpec {
    pub fn new(name: WitnessName) -> Self {
        WitnessSpec {
            name,
            b: 2,
            alphabet: vec!['a', 'b'],
        }
    }

    pub fn generate(&self) -> Result<Ast, WitnessError> {
        Ok(match self.name {
            WitnessName::DoubleWord => gen_double_word(),
            WitnessName::RepeatedSymbol => gen_repeated_symbol(&self.alphabet)?,
            WitnessName::Lb => gen_lb(self.b)?,
            WitnessName::MatchLang => gen_match_lang(),
            WitnessName::FermatA1 => gen_fermat().0,
            WitnessName::FermatA2 => gen_fermat().1,
            WitnessName::FermatA3 => gen_fermat().2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backtrack::match_full;
    use crate::syntax::{group_count, referenced_vars, render, validate};

    fn words(alphabet: &[char], max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    fn full(ast: &Ast, s: &str) -> bool {
        match_full(ast, s).unwrap().matched
    }

    #[test]
    fn generators_are_canonical() {
        let mut all = vec![gen_double_word(), gen_match_lang(), gen_repeated_symbol(&['a', 'b', 'c']).unwrap()];
        all.extend((1..=4).map(|b| gen_lb(b).unwrap()));
        let (a1, a2, a3) = gen_fermat();
        all.extend([a1, a2, a3]);
        for ast in all {
            assert_eq!(validate(&ast), Ok(()));
            assert_eq!(parse(&render(&ast)).unwrap(), ast, "{}", render(&ast));
        }
    }

    #[test]
    fn double_word() {
        let ast = gen_double_word();
        assert!(full(&ast, "abab"));
        assert!(!full(&ast, "ab"));
        for w in words(&['a', 'b'], 8) {
            assert_eq!(full(&ast, &w), double_word_member(&w), "{w}");
        }
    }

    #[test]
    fn repeated_symbol() {
        assert_eq!(render(&gen_repeated_symbol(&['a', 'b']).unwrap()), r"(a|b)*(a|b)(a|b)*\2(a|b)*");
        let sigma = ['a', 'b', 'c'];
        let ast = gen_repeated_symbol(&sigma).unwrap();
        assert!(full(&ast, "abcb"));
        assert!(!full(&ast, "abc"));
        for w in words(&sigma, 5) {
            assert_eq!(full(&ast, &w), repeated_symbol_member(&w, &sigma), "{w}");
        }
        let sizes: Vec<usize> = [2, 4, 8, 16]
            .iter()
            .map(|&k| {
                let sigma: Vec<char> = ('a'..).take(k).collect();
                render(&gen_repeated_symbol(&sigma).unwrap()).len()
            })
            .collect();
        let steps: Vec<usize> = sizes.windows(2).map(|w| w[1] - w[0]).collect();
        assert_eq!(steps[1], 2 * steps[0]);
        assert_eq!(steps[2], 2 * steps[1]);
        assert_eq!(gen_repeated_symbol(&[]), Err(WitnessError::EmptyAlphabet));
    }

    #[test]
    fn lb_family() {
        assert_eq!(render(&gen_lb(2).unwrap()), r"((0|1)*)#((0|1)*)#\3#\1");
        assert_eq!(render(&gen_lb(1).unwrap()), r"((0|1)*)#\1");
        let l3 = gen_lb(3).unwrap();
        assert_eq!(referenced_vars(&l3).len(), 3);
        assert_eq!(group_count(&l3), 6);
        assert!(lb_member("01#1#1#01", 2));
        assert!(!lb_member("01#1#0#01", 2));
        let l2 = gen_lb(2).unwrap();
        for w in words(&['0', '1', '#'], 6) {
            assert_eq!(full(&l2, &w), lb_member(&w, 2), "{w}");
        }
        assert_eq!(gen_lb(0), Err(WitnessError::BadParameter));
    }

    #[test]
    fn match_lang() {
        let m = gen_match_lang();
        assert_eq!(render(&m), r"((0|1)*)#(0|1)*\1(0|1)*");
        assert!(full(&m, "01#0011"));
        assert!(!full(&m, "11#000"));
        assert!(full(&m, "#01"));
        for w in words(&['0', '1', '#'], 6) {
            assert_eq!(full(&m, &w), match_lang_member(&w), "{w}");
        }
    }

    #[test]
    fn fermat() {
        let (a1, a2, a3) = gen_fermat();
        assert_eq!(render(&a1), r"((aa)+a)\1*a");
        assert_eq!(render(&a2), r"(a+a)\1+");
        assert!(render(&a3).starts_with(r"((aa)+a)\1*a|(a+a)\3+||a|a{2}|a{3}|a{5}|a{17}"));
        assert!(full(&a1, "aaaa"));
        assert!(!full(&a1, "aaaaa"));
        assert!(full(&a2, &"a".repeat(9)));
        assert!(!full(&a2, &"a".repeat(7)));
        for n in 0..=60u64 {
            let s = "a".repeat(n as usize);
            assert_eq!(full(&a1, &s), fermat_a1_member(n), "a1 {n}");
            assert_eq!(full(&a2, &s), fermat_a2_member(n), "a2 {n}");
            assert_eq!(full(&a3, &s), fermat_oracle(n), "a3 {n}");
        }
        assert!(fermat_oracle(5) && fermat_oracle(0) && fermat_oracle(2));
    }

    #[test]
    fn unary_sweep() {
        let p = |s| parse(s).unwrap();
        assert_eq!(bounded_unary_eq(&p(r"(0)\1"), &p("00"), 50).unwrap(), UnaryComparison::EqualUpTo(50));
        assert_eq!(
            bounded_unary_eq(&p("a|aa"), &p("a"), 10).unwrap(),
            UnaryComparison::FirstDifference {
                n: 2,
                left: true,
                right: false
            }
        );
        assert!(matches!(bounded_unary_eq(&p("a"), &p("b"), 3), Err(WitnessError::NonUnary(_))));
    }

    #[test]
    fn names() {
        for w in WitnessName::ALL {
            assert_eq!(w.as_str().parse::<WitnessName>().unwrap(), w);
            assert!(WitnessSpec::new(w).generate().is_ok());
        }
        assert!("nope".parse::<WitnessName>().is_err());
    }
}
