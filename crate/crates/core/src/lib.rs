//! Regular expressions with backreferences.
//!
//! * [`syntax`]: parser, renderer, validation, composition and the
//!   backreference-occurrence measure.
//! * [`backtrack`]: exhaustive-derivation matcher and language enumerator.
//! * [`multihead`]: one-way multi-head automata and their simulator.
//! * [`compile`]: translation of expressions into multi-head automata.
//! * [`reductions`]: 3-CNF, integer-expression and straight-line-program
//!   constructions.
//! * [`witnesses`]: named example languages with direct membership tests.

pub mod backtrack;
pub mod cli;
pub mod compile;
pub mod multihead;
pub mod random;
pub mod reductions;
pub mod syntax;
pub mod witnesses;

pub use syntax::{parse, render, Ast, Complexity, ParseError};
