use std::path::PathBuf;

use prekit::cli::run;

fn prekit(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("prekit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("prekit-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn analyze_reports() {
    let (code, out, _) = prekit(&["analyze", r"((a|b)*)\1"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "expression: ((a|b)*)\\1\nvalid: yes\ngroups: 2\nreferenced: [1]\nk: 1\nc: 1\nstar-free: no\n\
         sensing heads: 4\nnonsensing heads: 3\n"
    );
    let (code, out, _) = prekit(&["analyze", r"(a)(\1)*"]);
    assert_eq!(code, 0);
    assert!(out.contains("c: ω\n") && out.ends_with("nonsensing heads: unbounded\n"), "{out}");
}

#[test]
fn parse_errors_exit_2() {
    let (code, out, err) = prekit(&["parse", r"\1(a)"]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert_eq!(err, "error: bad-reference: \\1 is preceded by only 0 group(s)\n");
    let (code, _, err) = prekit(&["parse", "(a"]);
    assert_eq!(code, 2);
    assert_eq!(err, "error: unbalanced-paren at offset 0\n");
}

#[test]
fn match_engines() {
    let (code, out, _) = prekit(&["match", r"((a|b)*)\1", "abab"]);
    assert_eq!(code, 0);
    assert_eq!(out, "match\n  group 1: [0, 2) \"ab\"\n  group 2: [1, 2) \"b\"\n");
    assert_eq!(prekit(&["match", r"((a|b)*)\1", "aba"]), (1, "no match\n".into(), String::new()));
    let (code, out, _) = prekit(&["match", r"((a|b)*)\1", "abab", "--engine", "sensing"]);
    assert_eq!(code, 0);
    assert_eq!(out, "match\nvisited 107 configurations (21 states, 4 heads, bound 13125)\n");
    let (code, out, _) = prekit(&["match", r"(a)\1", "ab", "--engine", "sensing"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("no match\nvisited "), "{out}");
    let (code, _, err) = prekit(&["match", r"(a)(\1)*", "aa", "--engine", "nonsensing"]);
    assert_eq!(code, 2);
    assert!(err.contains("unbounded occurrences"), "{err}");
    assert_eq!(prekit(&["match", r"(0)\1", "1001", "--mode", "substring"]).1, "match at [1, 3)\n");
    assert_eq!(prekit(&["match", r"(00)\1+", "--unary", "6"]).0, 0);
    assert_eq!(prekit(&["match", r"(00)\1+", "--unary", "5"]).0, 1);
}

#[test]
fn compile_then_simulate() {
    let (code, machine, _) = prekit(&["compile", r"((a|b)*)\1"]);
    assert_eq!(code, 0);
    assert!(machine.contains("\"heads\": 4"), "{machine}");
    let path = temp_file("dw.json", &machine);
    let path = path.to_str().unwrap();
    assert_eq!(prekit(&["simulate", path, "abab"]), (0, "accept\nvisited 107 configurations\n".into(), String::new()));
    assert_eq!(prekit(&["simulate", path, "aba"]).0, 1);
    let (code, _, err) = prekit(&["simulate", path, "abc"]);
    assert_eq!((code, err.as_str()), (2, "error: subject symbol 'c' is not in the machine alphabet\n"));
}

#[test]
fn s_checker() {
    assert_eq!(prekit(&["simulate", "--s-checker", "aabaaabaaaaaa"]).1, "accept\nvisited 65 configurations\n");
    assert_eq!(prekit(&["simulate", "--s-checker", "aabaaabaaaa"]).0, 1);
}

#[test]
fn reductions() {
    let f1 = temp_file("f1.cnf", "p cnf 2 1\n1 -2 2 0\n");
    assert_eq!(
        prekit(&["reduce", "sat3", f1.to_str().unwrap()]),
        (0, "((0)|(0))((0)|(0))(\\2|\\6|\\5)\n000\n".into(), String::new())
    );
    let f2 = temp_file("f2.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
    assert_eq!(prekit(&["reduce", "sat3", f2.to_str().unwrap()]).1, "((0)|(0))(\\2|\\2|\\2)(\\3|\\3|\\3)\n000\n");
    assert_eq!(prekit(&["match", r"((0)|(0))(\2|\2|\2)(\3|\3|\3)", "000"]).0, 1);
    assert_eq!(prekit(&["reduce", "intexpr", "(10+(1u100))"]).1, "(0)\\1(0|((0)\\4)\\3)\n");
    assert_eq!(prekit(&["reduce", "sat3", "/nonexistent/prekit.cnf"]).0, 2);
}

#[test]
fn generators_and_equivalence() {
    assert_eq!(prekit(&["gen", "lb", "--b", "2"]).1, "((0|1)*)#((0|1)*)#\\3#\\1\n");
    assert_eq!(prekit(&["gen", "fermat-a1"]).1, "((aa)+a)\\1*a\n");
    assert_eq!(prekit(&["gen", "double-word"]).1, "((a|b)*)\\1\n");
    assert_eq!(prekit(&["eq", "fermat-a3", "a*", "--bound", "2000"]), (0, "equal up to 2000\n".into(), String::new()));
    assert_eq!(
        prekit(&["eq", "a*", "aa*", "--bound", "5"]),
        (1, "first difference at length 0 (left true, right false)\n".into(), String::new())
    );
}

#[test]
fn slp_commands() {
    let (code, text, _) = prekit(&["slp", "from-pre", r"(((0)\3)\2)\1"]);
    assert_eq!(code, 0);
    assert_eq!(text, "S -> G1 G1\nG1 -> G2 G2\nG2 -> G3 G3\nG3 -> '0'\n");
    let path = temp_file("enc8.slp", &text);
    let path = path.to_str().unwrap();
    assert_eq!(prekit(&["slp", "expand", path]).1, "00000000\n");
    assert_eq!(prekit(&["slp", "len", path]).1, "8\n");
    assert_eq!(prekit(&["slp", "eq", path, path]), (0, "equal\n".into(), String::new()));
    let other = temp_file("other.slp", "S -> A A\nA -> '0' '1'\n");
    assert_eq!(prekit(&["slp", "eq", path, other.to_str().unwrap()]).0, 1);
}

#[test]
fn check_and_usage() {
    let (code, out, _) = prekit(&["check", "--count", "50", "--seed", "3"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("all engines agree\n"), "{out}");
    assert_eq!(prekit(&["bogus"]).0, 2);
    assert_eq!(prekit(&["--help"]).0, 0);
}
