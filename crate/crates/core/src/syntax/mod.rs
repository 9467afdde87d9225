//! Concrete and abstract syntax.
//!
//! The dialect is C-braced pGCL:
//!
//! ```text
//! while (a != 0) {
//!   { a := 0 } [1/2] { b := b + 1 };
//!   k := k + 1
//! }
//! ```
//!
//! `[e]` between two braced blocks is a branch probability; everywhere else
//! it is an Iverson bracket. Uniform draws are written `x := unif(1..3)`.
//! Expectations use the same expression grammar plus `inf`, Iverson brackets
//! and `harm(e)`. Domains look like `a in {0,1}; b in 0..20`; comparison
//! operands in guards must be linear (with `% literal` allowed).

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use ast::{CmpOp, DomainValues, Expr, Pred, Rat, State, StateDomain, Stmt, Var};
pub use lexer::Span;
pub use parser::{
    parse_domain, parse_expectation, parse_predicate, parse_program, parse_state,
};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("{span}: unexpected character `{ch}`")]
    UnexpectedChar { ch: char, span: Span },
    #[error("{span}: found {found}, expected {expected}")]
    UnexpectedToken {
        found: String,
        expected: String,
        span: Span,
    },
    #[error("{span}: branch probability `{prob}` lies outside [0, 1]")]
    InvalidProbability { prob: String, span: Span },
    #[error("{span}: comparison operands in predicates must be linear")]
    NonlinearPredicate { span: Span },
    #[error("{span}: domain of `{var}` is empty")]
    EmptyDomain { var: String, span: Span },
    #[error("{span}: variable `{var}` listed twice in the domain")]
    DuplicateDomainVar { var: String, span: Span },
}
