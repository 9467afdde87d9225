//! Values, evaluation, substitution and pointwise comparison.

pub mod compare;
pub mod eval;
pub mod subst;
pub mod value;

pub use compare::{compare_on_domain, compare_on_states, ComparisonResult, Relation, Violation};
pub use eval::{eval, eval_pred, eval_signed};
pub use subst::{substitute, substitute_pred};
pub use value::{harmonic, ExtReal};

use crate::syntax::State;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AlgebraError {
    #[error("variable `{var}` is not bound in the state")]
    UnboundVariable { var: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("undefined arithmetic: {0}")]
    Undefined(String),
    #[error("operation produced NaN")]
    NotANumber,
    #[error("non-integer operand: {0}")]
    NonIntegerOperand(String),
    #[error("expectation evaluated to the negative value {value}")]
    NegativeExpectation { value: String },
    #[error("exponent {0} too large for exact arithmetic")]
    ExponentOverflow(i64),
    #[error("harmonic number argument out of supported range")]
    HarmonicOverflow,
}

/// States serialize as `{var: "value"}` maps with rationals in string form.
pub(crate) fn serialize_state<S: serde::Serializer>(
    state: &State,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(state.0.len()))?;
    for (k, v) in &state.0 {
        m.serialize_entry(k, &v.to_string())?;
    }
    m.end()
}
