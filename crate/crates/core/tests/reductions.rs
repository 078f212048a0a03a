use prekit::random::random_cnf;
use prekit::reductions::{brute_sat, sat3_roundtrip_check, CnfFormula, Lit};
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Unit propagation plus branching on the first unassigned variable.
fn dpll(clauses: &[Vec<Lit>], assignment: &mut [Option<bool>]) -> bool {
    loop {
        let mut unit = None;
        for clause in clauses {
            let mut open = Vec::new();
            let mut satisfied = false;
            for lit in clause {
                match assignment[lit.var] {
                    Some(v) if v == lit.positive => satisfied = true,
                    Some(_) => {}
                    None => open.push(*lit),
                }
            }
            if satisfied {
                continue;
            }
            match open.as_slice() {
                [] => return false,
                [only] => {
                    unit = Some(*only);
                    break;
                }
                _ => {}
            }
        }
        match unit {
            Some(lit) => assignment[lit.var] = Some(lit.positive),
            None => break,
        }
    }
    let Some(var) = (1..assignment.len()).find(|&v| assignment[v].is_none()) else {
        return true;
    };
    [true, false].into_iter().any(|value| {
        let mut next = assignment.to_vec();
        next[var] = Some(value);
        dpll(clauses, &mut next)
    })
}

fn dpll_sat(f: &CnfFormula) -> bool {
    let clauses: Vec<Vec<Lit>> = f.clauses.iter().map(|c| c.to_vec()).collect();
    dpll(&clauses, &mut vec![None; f.num_vars + 1])
}

#[test]
fn brute_force_agrees_with_dpll() {
    let mut rng = StdRng::seed_from_u64(55);
    let mut satisfiable = 0;
    for _ in 0..2000 {
        let f = random_cnf(&mut rng, 5, 8);
        let expected = dpll_sat(&f);
        assert_eq!(brute_sat(&f).unwrap(), expected, "{}", f.to_dimacs());
        satisfiable += usize::from(expected);
    }
    assert!(satisfiable > 0 && satisfiable < 2000, "{satisfiable}");
}

#[test]
fn roundtrip_variants_agree() {
    let mut rng = StdRng::seed_from_u64(56);
    for _ in 0..300 {
        let f = random_cnf(&mut rng, 5, 8);
        let rt = sat3_roundtrip_check(&f).unwrap();
        assert!(rt.agrees(), "{} gave {rt:?}", f.to_dimacs());
        assert_eq!(rt.satisfiable, dpll_sat(&f));
    }
}
