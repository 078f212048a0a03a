use prekit::backtrack::{enumerate_language, match_full};
use prekit::compile::{compile_nonsensing_over, compile_sensing_over};
use prekit::random::{random_expression, random_subject, RandomSpec};
use prekit::render;
use prekit::syntax::c_of;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::collections::BTreeSet;

#[test]
fn engines_agree_on_random_pairs() {
    let mut rng = StdRng::seed_from_u64(2024);
    let spec = RandomSpec::default();
    let sigma: BTreeSet<char> = spec.alphabet.iter().copied().collect();
    for _ in 0..3000 {
        let ast = random_expression(&mut rng, &spec);
        let sensing = compile_sensing_over(&ast, &sigma).unwrap();
        let nonsensing = c_of(&ast)
            .is_finite()
            .then(|| compile_nonsensing_over(&ast, &sigma).unwrap());
        for _ in 0..8 {
            let s = random_subject(&mut rng, &spec.alphabet, 10);
            let expected = match_full(&ast, &s).unwrap().matched;
            assert_eq!(sensing.simulate(&s).unwrap().accepted, expected, "{} on {s:?}", render(&ast));
            if let Some(m) = &nonsensing {
                assert_eq!(m.simulate(&s).unwrap().accepted, expected, "{} on {s:?} (non-sensing)", render(&ast));
            }
        }
    }
}

#[test]
fn matcher_agrees_with_enumerator() {
    let mut rng = StdRng::seed_from_u64(99);
    let spec = RandomSpec::default();
    for _ in 0..300 {
        let ast = random_expression(&mut rng, &spec);
        let lang = enumerate_language(&ast, 6).unwrap();
        for len in 0..=6u32 {
            for bits in 0..(1u32 << len) {
                let s: String = (0..len).map(|i| if bits >> i & 1 == 1 { 'b' } else { 'a' }).collect();
                assert_eq!(
                    match_full(&ast, &s).unwrap().matched,
                    lang.contains(&s),
                    "{} on {s:?}",
                    render(&ast)
                );
            }
        }
    }
}
