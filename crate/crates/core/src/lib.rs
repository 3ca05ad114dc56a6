//! A reasoner for multi-standpoint S4F logic.
//!
//! The library covers the full pipeline: parsing the standpoint language
//! and its default/logic-program/argumentation dialects, model checking
//! explicit structures, monotonic satisfiability and entailment through a
//! bounded-structure SAT encoding, minimal-model enumeration through the
//! partition conditions, credulous and sceptical queries through the
//! fresh-atom reductions, and export to disjunctive ASP.

pub mod aspgen;
pub mod embeddings;
pub mod hierarchy;
pub mod monosat;
pub mod nonmono;
pub mod oracle;
pub mod propsat;
pub mod structures;
pub mod syntax;

pub use syntax::{parse_expression, parse_formula, parse_theory, Mode, Theory};
