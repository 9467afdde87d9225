//! Monte-Carlo simulation oracle, independent of the transformer code.
//!
//! The simulator interprets programs operationally: it draws branch and
//! uniform choices from a deterministic per-trajectory random stream, counts
//! runtime cost in the same units the runtime transformer charges, and
//! aggregates trajectory statistics into [`Estimate`]s with standard errors.
//! Proof-rule verdicts are cross-checked against these estimates, so this
//! module deliberately shares no evaluation machinery with the fixed-point
//! engine beyond expression evaluation itself.
//!
//! Determinism: estimates depend only on the seed and sample count — never
//! on thread count or scheduling — because every trajectory has its own
//! generator derived from `(seed, index)` and chunk statistics are merged
//! in a fixed order.

mod estimate;
mod rng;
mod run;

pub use estimate::{
    estimate_ert, estimate_induced_process, estimate_looping_time, estimate_post,
    estimate_termination_probability, Estimate, LoopingTimeEstimate, Welford,
};
pub use rng::{trajectory_rng, SplitMix64};
pub use run::{run_loop_heads, run_program, LoopRun, Run, SimConfig};

use crate::algebra::AlgebraError;
use crate::transformers::TransformError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    /// An expectation evaluated to infinity at a sampled state; a mean over
    /// such samples would be meaningless.
    #[error("sampled expectation is infinite at state ({state})")]
    InfiniteSample { state: String },
}
