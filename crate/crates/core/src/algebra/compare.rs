//! Pointwise comparison of expectations over finite state domains.

use super::eval::eval;
use super::value::ExtReal;
use super::AlgebraError;
use crate::syntax::{Expr, State, StateDomain};

/// Outcome of a pointwise comparison of `f1` against `f2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    /// Equal within tolerance at every state.
    Eq,
    /// `f1 <= f2 + tol` everywhere, strictly below somewhere.
    Leq,
    /// `f2 <= f1 + tol` everywhere, strictly above somewhere.
    Geq,
    /// Violations in both directions.
    Incomparable,
}

/// Worst violation of one direction, with the state it happened at.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Violation {
    #[serde(serialize_with = "super::serialize_state")]
    pub state: State,
    pub lhs: ExtReal,
    pub rhs: ExtReal,
    /// How far the violated side overshoots: for a `f1 ⪯ f2` violation this
    /// is `f1 - f2` at the witness state.
    pub gap: ExtReal,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ComparisonResult {
    pub relation: Relation,
    pub states_checked: usize,
    /// Worst witness against `f1 ⪯ f2`, if any.
    pub leq_violation: Option<Violation>,
    /// Worst witness against `f2 ⪯ f1`, if any.
    pub geq_violation: Option<Violation>,
    /// Largest violation magnitude in either direction (0 when EQ).
    pub max_violation: ExtReal,
    /// True when any evaluated value was a float, i.e. the comparison left
    /// exact-rational territory and the caller may want a wider tolerance.
    pub used_float: bool,
}

impl ComparisonResult {
    pub fn holds_leq(&self) -> bool {
        matches!(self.relation, Relation::Eq | Relation::Leq)
    }

    pub fn holds_geq(&self) -> bool {
        matches!(self.relation, Relation::Eq | Relation::Geq)
    }
}

/// Compare `f1` and `f2` pointwise on every state of `domain`, with equality
/// slack `tol` in both directions.
pub fn compare_on_domain(
    f1: &Expr,
    f2: &Expr,
    domain: &StateDomain,
    tol: f64,
) -> Result<ComparisonResult, AlgebraError> {
    compare_on_states(f1, f2, &domain.enumerate(), |_| tol)
}

/// Same as [`compare_on_domain`], but over an explicit state list and with a
/// per-state tolerance chosen from whether floats were involved at that
/// state (`tol_for(used_float_here)`).
pub fn compare_on_states(
    f1: &Expr,
    f2: &Expr,
    states: &[State],
    tol_for: impl Fn(bool) -> f64,
) -> Result<ComparisonResult, AlgebraError> {
    let mut leq_violation: Option<Violation> = None;
    let mut geq_violation: Option<Violation> = None;
    let mut used_float = false;

    for s in states {
        let v1 = eval(f1, s)?;
        let v2 = eval(f2, s)?;
        let floats_here = v1.is_float() || v2.is_float();
        used_float |= floats_here;
        let tol = tol_for(floats_here);

        if !v1.leq_with_tol(&v2, tol) {
            let gap = v1.gap_above(&v2);
            let worse = leq_violation
                .as_ref()
                .map(|w| gap.cmp_exact(&w.gap) == std::cmp::Ordering::Greater)
                .unwrap_or(true);
            if worse {
                leq_violation = Some(Violation {
                    state: s.clone(),
                    lhs: v1.clone(),
                    rhs: v2.clone(),
                    gap,
                });
            }
        }
        if !v2.leq_with_tol(&v1, tol) {
            let gap = v2.gap_above(&v1);
            let worse = geq_violation
                .as_ref()
                .map(|w| gap.cmp_exact(&w.gap) == std::cmp::Ordering::Greater)
                .unwrap_or(true);
            if worse {
                geq_violation = Some(Violation {
                    state: s.clone(),
                    lhs: v1.clone(),
                    rhs: v2.clone(),
                    gap,
                });
            }
        }
    }

    let relation = match (&leq_violation, &geq_violation) {
        (None, None) => Relation::Eq,
        (None, Some(_)) => Relation::Leq,
        (Some(_), None) => Relation::Geq,
        (Some(_), Some(_)) => Relation::Incomparable,
    };
    let max_violation = match (&leq_violation, &geq_violation) {
        (None, None) => ExtReal::zero(),
        (Some(a), None) => a.gap.clone(),
        (None, Some(b)) => b.gap.clone(),
        (Some(a), Some(b)) => a.gap.max(&b.gap),
    };
    Ok(ComparisonResult {
        relation,
        states_checked: states.len(),
        leq_violation,
        geq_violation,
        max_violation,
        used_float,
    })
}
