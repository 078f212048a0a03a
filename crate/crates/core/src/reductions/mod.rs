//! Reductions into expression matching and their checkers: 3-CNF
//! satisfiability, integer expressions in unary, and straight-line
//! programs for star-free expressions.

mod intexpr;
mod sat;
mod slp;

pub use intexpr::{
    encode_unary, intexpr_eval, intexpr_parse, intexpr_to_pre, BoundTooLarge, Evaluation, IntExpr,
    IntExprParseError, ZeroLength, MAX_EVAL_BOUND,
};
pub use sat::{
    brute_sat, parse_dimacs, sat3_roundtrip_check, sat3_to_pre, CnfError, CnfFormula, Lit, RoundTrip,
    RoundTripError,
};
pub use slp::{
    format_slp, parse_slp, slp_eq, slp_expand, slp_from_choice, slp_len, Production, Slp, SlpError, Sym,
    DEFAULT_MAX_LEN,
};
