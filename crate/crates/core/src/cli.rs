//! The `prekit` command line.
//!
//! Exit codes: 0 for success, match, accept or equality; 1 for no match,
//! reject or difference; 2 for any error.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::backtrack::{match_full, wrap_matching, Backtracker, DEFAULT_STEP_BUDGET};
use crate::compile::{compile, head_bounds, Variant};
use crate::multihead::{export_machine, import_machine, s_checker_machine, to_dot, MultiheadMachine};
use crate::random::{random_expression, random_subject, RandomSpec};
use crate::reductions::{
    format_slp, intexpr_parse, intexpr_to_pre, parse_dimacs, parse_slp, sat3_to_pre, slp_eq, slp_expand,
    slp_from_choice, slp_len, Slp, DEFAULT_MAX_LEN,
};
use crate::syntax::{c_of, group_count, literals_of, parse, referenced_vars, render, validate, Ast, Complexity};
use crate::witnesses::{bounded_unary_eq, UnaryComparison, WitnessName, WitnessSpec};

#[derive(Parser, Debug)]
#[command(name = "prekit", version, about = "Regular expressions with backreferences: matching, compilation to multi-head automata, reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate an expression, print its canonical form and tree.
    Parse { expr: String },
    /// Report group structure, occurrence measure and head budgets.
    Analyze { expr: String },
    /// Match a subject against an expression.
    Match(MatchArgs),
    /// Compile an expression into a multi-head automaton file.
    Compile {
        expr: String,
        #[arg(long, value_enum, default_value_t = EngineVariant::Sensing)]
        variant: EngineVariant,
        /// Emit Graphviz instead of the machine file.
        #[arg(long)]
        dot: bool,
    },
    /// Run a machine file (or the built-in S checker) on a subject.
    Simulate {
        /// Machine file; omit when using --s-checker.
        #[arg(required_unless_present = "s_checker")]
        machine: Option<String>,
        subject: Option<String>,
        #[arg(long)]
        s_checker: bool,
        #[command(flatten)]
        unary: UnaryArg,
    },
    /// Hardness reductions.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Print a named witness expression.
    Gen {
        #[arg(value_parser = parse_witness_name)]
        name: WitnessName,
        /// Block count for lb.
        #[arg(long, default_value_t = 2)]
        b: u32,
        /// Alphabet for repeated-symbol, as a string of symbols.
        #[arg(long, default_value = "ab")]
        alphabet: String,
    },
    /// Compare two unary expressions on all lengths up to a bound.
    Eq {
        /// Expression or witness name.
        left: String,
        /// Expression or witness name.
        right: String,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Straight-line programs.
    #[command(subcommand)]
    Slp(SlpCommand),
    /// Random differential run of all engines.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

#[derive(Args, Debug)]
struct UnaryArg {
    /// Use N copies of the single symbol instead of an explicit subject.
    #[arg(long, value_name = "N")]
    unary: Option<usize>,
}

#[derive(Args, Debug)]
struct MatchArgs {
    expr: String,
    subject: Option<String>,
    #[arg(long, value_enum, default_value_t = Engine::Backtrack)]
    engine: Engine,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    mode: Mode,
    #[command(flatten)]
    unary: UnaryArg,
    /// Step budget of the backtracking engine.
    #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
    budget: u64,
}

#[derive(Subcommand, Debug)]
enum ReduceCommand {
    /// 3-CNF in DIMACS form (`-` for standard input) to expression and subject.
    Sat3 { file: String },
    /// Integer expression to unary expression.
    Intexpr { text: String },
}

#[derive(Subcommand, Debug)]
enum SlpCommand {
    /// Build the program for one derivation of a star-free expression.
    FromPre {
        expr: String,
        /// One 0/1 digit per alternative met, depth first.
        #[arg(long, default_value = "")]
        choice: String,
    },
    /// Print the derived string.
    Expand {
        file: String,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: u64,
    },
    /// Print the derived length.
    Len { file: String },
    /// Compare the strings derived by two programs.
    Eq { left: String, right: String },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Backtrack,
    Sensing,
    Nonsensing,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EngineVariant {
    Sensing,
    Nonsensing,
}

impl From<EngineVariant> for Variant {
    fn from(v: EngineVariant) -> Variant {
        match v {
            EngineVariant::Sensing => Variant::Sensing,
            EngineVariant::Nonsensing => Variant::Nonsensing,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Full,
    Substring,
}

fn parse_witness_name(s: &str) -> Result<WitnessName, String> {
    s.parse().map_err(|e: crate::witnesses::WitnessError| e.to_string())
}

type Outcome = Result<i32, String>;

fn fail<T>(e: impl ToString) -> Result<T, String> {
    Err(e.to_string())
}

fn expression(text: &str) -> Result<Ast, String> {
    let ast = parse(text).map_err(|e| format!("{e}"))?;
    validate(&ast).map_err(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))?;
    Ok(ast)
}

/// An expression, or a witness name with default parameters.
fn expression_or_witness(text: &str) -> Result<Ast, String> {
    match text.parse::<WitnessName>() {
        Ok(name) => WitnessSpec::new(name).generate().map_err(|e| e.to_string()),
        Err(_) => expression(text),
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("standard input: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn read_slp(path: &str) -> Result<Slp, String> {
    parse_slp(&read_input(path)?).map_err(|e| format!("{path}: {e}"))
}

fn subject(explicit: Option<String>, unary: &UnaryArg, symbols: &BTreeSet<char>) -> Result<String, String> {
    match (explicit, unary.unary) {
        (Some(_), Some(_)) => fail("give either a subject or --unary, not both"),
        (Some(s), None) => Ok(s),
        (None, Some(n)) => {
            let letter = match symbols.len() {
                0 => '0',
                1 => *symbols.iter().next().expect("one symbol"),
                _ => return fail("--unary needs an expression or machine over a single symbol"),
            };
            Ok(std::iter::repeat_n(letter, n).collect())
        }
        (None, None) => Ok(String::new()),
    }
}

fn cmd_parse(out: &mut dyn Write, expr: &str) -> Outcome {
    let ast = expression(expr)?;
    writeln!(out, "{}", render(&ast)).map_err(|e| e.to_string())?;
    writeln!(out, "{ast:#?}").map_err(|e| e.to_string())?;
    Ok(0)
}

fn cmd_analyze(out: &mut dyn Write, expr: &str) -> Outcome {
    let ast = expression(expr)?;
    let budget = head_bounds(&ast).map_err(|e| e.to_string())?;
    let refs: Vec<String> = referenced_vars(&ast).iter().map(u32::to_string).collect();
    let mut report = String::new();
    report += &format!("expression: {}\n", render(&ast));
    report += "valid: yes\n";
    report += &format!("groups: {}\n", group_count(&ast));
    report += &format!("referenced: [{}]\n", refs.join(", "));
    report += &format!("k: {}\n", refs.len());
    report += &format!("c: {}\n", c_of(&ast));
    report += &format!("star-free: {}\n", if ast.is_star_free() { "yes" } else { "no" });
    report += &format!("sensing heads: {}\n", budget.sensing_heads);
    match budget.nonsensing_heads {
        Some(h) => report += &format!("nonsensing heads: {h}\n"),
        None => report += "nonsensing heads: unbounded\n",
    }
    out.write_all(report.as_bytes()).map_err(|e| e.to_string())?;
    Ok(0)
}

fn cmd_match(out: &mut dyn Write, args: MatchArgs) -> Outcome {
    let ast = expression(&args.expr)?;
    let s = subject(args.subject, &args.unary, &literals_of(&ast))?;
    let w = |out: &mut dyn Write, line: String| writeln!(out, "{line}").map_err(|e| e.to_string());
    let matched = match args.engine {
        Engine::Backtrack => {
            let engine = Backtracker::new(&ast).map_err(|e| e.to_string())?.with_budget(args.budget);
            let chars: Vec<char> = s.chars().collect();
            match args.mode {
                Mode::Full => {
                    let outcome = engine.match_full(&chars).map_err(|e| e.to_string())?;
                    if let Some(witness) = &outcome.witness {
                        w(out, "match".into())?;
                        for (g, seg) in &witness.captures.bindings {
                            let text = match seg {
                                Some((a, b)) => format!("[{a}, {b}) {:?}", chars[*a..*b].iter().collect::<String>()),
                                None => "unset".into(),
                            };
                            w(out, format!("  group {g}: {text}"))?;
                        }
                    }
                    outcome.matched
                }
                Mode::Substring => match engine.match_substring(&chars).map_err(|e| e.to_string())? {
                    Some(witness) => {
                        let (a, b) = witness.segment;
                        w(out, format!("match at [{a}, {b})"))?;
                        true
                    }
                    None => false,
                },
            }
        }
        Engine::Sensing | Engine::Nonsensing => {
            let variant = if args.engine == Engine::Sensing {
                Variant::Sensing
            } else {
                Variant::Nonsensing
            };
            let mut symbols: BTreeSet<char> = s.chars().collect();
            symbols.extend(literals_of(&ast));
            let target = match args.mode {
                Mode::Full => ast,
                Mode::Substring => wrap_matching(&ast, &symbols),
            };
            let machine = compile(&target, variant, &symbols).map_err(|e| e.to_string())?;
            let stats = machine.simulate(&s).map_err(|e| e.to_string())?;
            w(out, if stats.accepted { "match" } else { "no match" }.into())?;
            w(
                out,
                format!(
                    "visited {} configurations ({} states, {} heads, bound {})",
                    stats.visited,
                    machine.states.len(),
                    machine.heads,
                    machine.configuration_bound(s.chars().count())
                ),
            )?;
            return Ok(if stats.accepted { 0 } else { 1 });
        }
    };
    if !matched {
        w(out, "no match".into())?;
    }
    Ok(if matched { 0 } else { 1 })
}

fn cmd_simulate(out: &mut dyn Write, machine: Option<String>, explicit: Option<String>, s_checker: bool, unary: UnaryArg) -> Outcome {
    let (machine, explicit): (MultiheadMachine, Option<String>) = match (s_checker, machine) {
        (true, Some(first)) if explicit.is_none() => (s_checker_machine(), Some(first)),
        (true, Some(_)) => return fail("--s-checker takes no machine file"),
        (true, None) => (s_checker_machine(), explicit),
        (false, Some(path)) => (import_machine(&read_input(&path)?).map_err(|e| format!("{path}: {e}"))?, explicit),
        (false, None) => return fail("a machine file is required"),
    };
    let s = subject(explicit, &unary, &machine.alphabet)?;
    let stats = machine.simulate(&s).map_err(|e| e.to_string())?;
    writeln!(out, "{}", if stats.accepted { "accept" } else { "reject" }).map_err(|e| e.to_string())?;
    writeln!(out, "visited {} configurations", stats.visited).map_err(|e| e.to_string())?;
    Ok(if stats.accepted { 0 } else { 1 })
}

fn cmd_check(out: &mut dyn Write, seed: u64, count: usize) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed);
    let spec = RandomSpec::default();
    let sigma: BTreeSet<char> = spec.alphabet.iter().copied().collect();
    let mut nonsensing_runs = 0;
    for _ in 0..count {
        let ast = random_expression(&mut rng, &spec);
        let s = random_subject(&mut rng, &spec.alphabet, 10);
        let expected = match_full(&ast, &s).map_err(|e| e.to_string())?.matched;
        let mut results = vec![("sensing", compile(&ast, Variant::Sensing, &sigma))];
        if c_of(&ast) != Complexity::Omega {
            nonsensing_runs += 1;
            results.push(("nonsensing", compile(&ast, Variant::Nonsensing, &sigma)));
        }
        for (name, machine) in results {
            let got = machine.map_err(|e| e.to_string())?.simulate(&s).map_err(|e| e.to_string())?.accepted;
            if got != expected {
                writeln!(out, "disagreement: {} on {s:?}: backtrack {expected}, {name} {got}", render(&ast))
                    .map_err(|e| e.to_string())?;
                return Ok(1);
            }
        }
    }
    writeln!(out, "{count} pairs, {nonsensing_runs} with finite occurrences: all engines agree").map_err(|e| e.to_string())?;
    Ok(0)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let io = |r: io::Result<()>| r.map_err(|e| e.to_string());
    match cli.command {
        Command::Parse { expr } => cmd_parse(out, &expr),
        Command::Analyze { expr } => cmd_analyze(out, &expr),
        Command::Match(args) => cmd_match(out, args),
        Command::Compile { expr, variant, dot } => {
            let ast = expression(&expr)?;
            let machine = compile(&ast, variant.into(), &BTreeSet::new()).map_err(|e| e.to_string())?;
            let text = if dot { to_dot(&machine) } else { export_machine(&machine) };
            io(out.write_all(text.as_bytes()))?;
            Ok(0)
        }
        Command::Simulate {
            machine,
            subject,
            s_checker,
            unary,
        } => cmd_simulate(out, machine, subject, s_checker, unary),
        Command::Reduce(ReduceCommand::Sat3 { file }) => {
            let formula = parse_dimacs(&read_input(&file)?).map_err(|e| format!("{file}: {e}"))?;
            let (ast, s) = sat3_to_pre(&formula);
            io(writeln!(out, "{}\n{s}", render(&ast)))?;
            Ok(0)
        }
        Command::Reduce(ReduceCommand::Intexpr { text }) => {
            let e = intexpr_parse(&text).map_err(|e| e.to_string())?;
            io(writeln!(out, "{}", render(&intexpr_to_pre(&e))))?;
            Ok(0)
        }
        Command::Gen { name, b, alphabet } => {
            let spec = WitnessSpec {
                name,
                b,
                alphabet: alphabet.chars().collect(),
            };
            let ast = spec.generate().map_err(|e| e.to_string())?;
            io(writeln!(out, "{}", render(&ast)))?;
            Ok(0)
        }
        Command::Eq { left, right, bound } => {
            let a = expression_or_witness(&left)?;
            let b = expression_or_witness(&right)?;
            let result = bounded_unary_eq(&a, &b, bound).map_err(|e| e.to_string())?;
            io(writeln!(out, "{result}"))?;
            Ok(match result {
                UnaryComparison::EqualUpTo(_) => 0,
                UnaryComparison::FirstDifference { .. } => 1,
            })
        }
        Command::Slp(SlpCommand::FromPre { expr, choice }) => {
            let ast = expression(&expr)?;
            let bytes = choice
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or(format!("bad choice digit {c:?}")))
                .collect::<Result<Vec<u8>, String>>()?;
            let (slp, _) = slp_from_choice(&ast, &bytes).map_err(|e| e.to_string())?;
            io(out.write_all(format_slp(&slp).as_bytes()))?;
            Ok(0)
        }
        Command::Slp(SlpCommand::Expand { file, max_len }) => {
            let text = slp_expand(&read_slp(&file)?, max_len).map_err(|e| e.to_string())?;
            io(writeln!(out, "{text}"))?;
            Ok(0)
        }
        Command::Slp(SlpCommand::Len { file }) => {
            let n = slp_len(&read_slp(&file)?).map_err(|e| e.to_string())?;
            io(writeln!(out, "{n}"))?;
            Ok(0)
        }
        Command::Slp(SlpCommand::Eq { left, right }) => {
            let equal = slp_eq(&read_slp(&left)?, &read_slp(&right)?).map_err(|e| e.to_string())?;
            io(writeln!(out, "{}", if equal { "equal" } else { "different" }))?;
            Ok(if equal { 0 } else { 1 })
        }
        Command::Check { seed, count } => cmd_check(out, seed, count),
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}
