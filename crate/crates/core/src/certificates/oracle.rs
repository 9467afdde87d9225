//! Independent cross-check of accepted certificates against value
//! iteration.
//!
//! The oracle solves the loop's transformer by value iteration under an
//! explicit truncation — the user-supplied truncation window when one is
//! annotated, otherwise the domain bounds widened by a safety margin — and
//! compares the certified bound against the result at every domain state.
//! Truncation makes the oracle's values certified lower bounds of the true
//! transformer values, which is exactly the right shape for checking lower
//! bounds (`bound <= oracle` remains sound evidence) and honest, clearly
//! labelled evidence for upper bounds.

use super::conditions::tol_for;
use super::rules::CertConfig;
use super::{AnnotationSet, CertError, OracleSummary};
use crate::algebra::ExtReal;
use crate::syntax::{Expr, Rat, State, Stmt};
use crate::transformers::{
    eval_transformer_many, BoundedValue, FixpointConfig, TransformerKind, Truncation,
};

/// The fixed-point settings the oracle runs under: always explicitly
/// truncated, preferring the annotated truncation window.
pub(crate) fn oracle_fixpoint(ann: &AnnotationSet, cfg: &CertConfig) -> FixpointConfig {
    let bounds = match &ann.truncation {
        Some(d) => d.bounds(),
        None => {
            let margin = Rat::from_integer(cfg.oracle_margin.into());
            ann.domain
                .bounds()
                .into_iter()
                .map(|(v, (lo, hi))| (v, (lo - &margin, hi + &margin)))
                .collect()
        }
    };
    FixpointConfig {
        truncation: Some(Truncation { bounds }),
        ..cfg.fixpoint.clone()
    }
}

/// Value-iterates `transformer(loop, post)` at the given states under the
/// oracle truncation.
pub(crate) fn vi_on(
    kind: TransformerKind,
    loop_stmt: &Stmt,
    post: &Expr,
    states: &[State],
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<Vec<BoundedValue>, CertError> {
    Ok(eval_transformer_many(
        kind,
        loop_stmt,
        post,
        states,
        &oracle_fixpoint(ann, cfg),
    )?)
}

/// Which side of the oracle value the certified bound claims to be on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    /// The certificate claims `bound >= transformer` (oracle must not
    /// exceed the bound).
    Upper,
    /// The certificate claims `bound <= transformer` (the bound must not
    /// exceed the oracle).
    Lower,
}

/// Compares the certified per-state bounds against the oracle values.
/// States where value iteration did not converge are excluded from the
/// comparison but counted in the summary.
pub(crate) fn cross_check(
    side: Side,
    bounds: &[ExtReal],
    states: &[State],
    vi: &[BoundedValue],
    note: String,
    cfg: &CertConfig,
) -> OracleSummary {
    debug_assert_eq!(bounds.len(), states.len());
    debug_assert_eq!(vi.len(), states.len());
    let mut converged = 0usize;
    let mut max_violation = 0.0f64;
    let mut worst: Option<&State> = None;
    for i in 0..states.len() {
        let bv = &vi[i];
        if !bv.converged {
            continue;
        }
        converged += 1;
        let slack = 3.0 * tol_for(cfg, bv.value.is_float() || bounds[i].is_float());
        let (lhs, rhs) = match side {
            Side::Lower => (&bounds[i], &bv.value),
            Side::Upper => (&bv.value, &bounds[i]),
        };
        if !lhs.leq_with_tol(rhs, slack) {
            let gap = lhs.gap_above(rhs).to_f64();
            if worst.is_none() || gap > max_violation {
                max_violation = gap;
                worst = Some(&states[i]);
            }
        }
    }
    let lower_only = vi.iter().filter(|b| b.is_lower_bound_only).count();
    let note = if lower_only > 0 {
        format!("{note}; {lower_only} of {} oracle values are certified lower bounds (truncation or budget)", vi.len())
    } else {
        note
    };
    OracleSummary {
        checked_states: states.len(),
        converged_states: converged,
        agreed: worst.is_none(),
        max_violation,
        worst_state: worst.map(|s| s.to_string()),
        note,
    }
}
