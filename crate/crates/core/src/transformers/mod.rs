//! Expectation transformers: weakest pre-expectations (`wp`) and expected
//! runtimes (`ert`).
//!
//! Three layers, used by everything above them:
//!
//! * [`transform_loopfree`] — symbolic transformation of loop-free programs:
//!   the result is an expectation over the initial state, computed by
//!   substitution and guarding.
//! * [`char_apply`] / [`iterate_char`] — the characteristic function of a
//!   loop with respect to a post-expectation (or run-time continuation), and
//!   its finite symbolic iterates.
//! * [`eval_transformer`] and friends — numeric least-fixed-point evaluation
//!   at concrete states, which handles nested loops and is the basis for
//!   every cross-check.

mod characteristic;
mod fixpoint;
mod loopfree;

pub use characteristic::{as_loop, char_apply, iterate_char};
pub(crate) use fixpoint::{assign_state, unif_bounds};
pub use fixpoint::{
    char_value_at, eval_transformer, eval_transformer_many, kleene_iterates, prob_at,
    transformer_value, BoundedValue, Cont, EvalFlags, FixpointConfig, Truncation,
    DIVERGE_THRESHOLD,
};
pub use loopfree::{ert_loopfree, iverson, transform_loopfree, wp_loopfree, TransformerKind};

use crate::algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// Symbolic loop-free transformation was asked to cross a `while`.
    #[error("program contains a loop; use the fixed-point evaluator")]
    LoopEncountered,
    #[error("statement is not a while loop")]
    NotALoop,
    #[error("uniform bounds must be integer constants, got `{bound}`")]
    NonConstantUniformBounds { bound: String },
    #[error("invalid uniform range: lo = {lo}, hi = {hi}")]
    InvalidUniformRange { lo: String, hi: String },
    #[error("branch probability {value} is outside [0, 1]")]
    ProbabilityOutOfRange { value: String },
    #[error("assignment to `{var}` produced a non-finite value ({value})")]
    NonFiniteAssignment { var: String, value: String },
    #[error("reachable state space exceeds the cap ({count} states); add or tighten truncation bounds")]
    StateSpaceExplosion { count: usize },
    #[error("fixed-point sweep decreased at state ({state}): {old} -> {new}")]
    NonMonotoneIteration { state: String, old: f64, new: f64 },
}
