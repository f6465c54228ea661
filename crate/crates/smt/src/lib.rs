// SPDX-License-Identifier: Apache-2.0

//! QF_BV encoding of the PMP checker.
//!
//! [`compile_checker`] turns the checker into a bitvector term over symbolic
//! register and access variables. [`compile_property_negation`] wraps it in a
//! document asserting the negation of one property, so `unsat` from a solver
//! means the property holds for every input at those parameters.
//!
//! The crate carries its own evaluator ([`eval_term`]) and a printer/parser
//! pair for the emitted SMT-LIB fragment, so the encoding can be checked
//! without an external solver.

mod compile;
mod doc;
mod error;
mod eval;
mod model;
mod parse;
mod render;
mod solver;
mod term;

pub use compile::{
    assignment_for, compile_checker, compile_checker_for, compile_property_negation, compile_property_negation_for,
    decode_output, file_name, negated_assertion_name, var_addr_reg, var_cfg, CHECKER_DEF, OUT, PRV_VALID, VAR_ADDR,
    VAR_PRV, VAR_SIZE,
};
pub use doc::{Declaration, NamedAssertion, SmtDocument, QF_BV};
pub use error::{CompileError, DocError, EvalError, ParseError, ParseErrorKind, SearchError, TermError};
pub use eval::{eval_term, Assignment, CompiledTerm, Value};
pub use model::find_model;
pub use parse::parse;
pub use render::render;
pub use solver::{run_solver, SolverError, SolverVerdict};
pub use term::{Node, Op, Sort, Term, MAX_WIDTH};
