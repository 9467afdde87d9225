//! Side-condition checkers and the proof-rule engine.
//!
//! Every rule follows the same shape: the user supplies an [`AnnotationSet`]
//! (loop, post-expectation, candidate invariant, finite state domain, and
//! the rule-specific claims), the engine mechanically checks each side
//! condition of the cited rule over the domain, and the resulting
//! [`Certificate`] records every condition with its outcome and witness.
//!
//! Verdict semantics:
//!
//! * `ACCEPTED` — every side condition passed **and** the independent
//!   value-iteration oracle found no state contradicting the certified
//!   bound.
//! * `REJECTED` — some side condition failed decisively; the certificate
//!   carries a witness state.
//! * `INCONCLUSIVE` — nothing failed decisively, but some check could not
//!   be decided (for example a comparison against a value that is only a
//!   certified lower bound), or the oracle disagreed with an otherwise
//!   clean certificate.
//!
//! Two caveats apply to every verdict and are stamped on each certificate:
//! all quantifiers range over the finite annotation domain, and
//! termination-behaviour conditions (almost-sure termination, bounded or
//! integrable looping times) are supported by *simulation evidence*, not
//! proof — they are undecidable in general.

mod conditions;
mod oracle;
mod rules;

pub use conditions::{
    check_cdb, check_harmonization, check_invariant, check_uniform_integrability_empirical, delta,
    Direction, UiReport, UiStateReport,
};
pub use rules::{
    prove_lower_ert, prove_lower_mciver, prove_lower_ost, prove_upper_park, CertConfig,
    MciverVariant, OstRule,
};

use crate::algebra::{AlgebraError, ExtReal};
use crate::simulator::SimError;
use crate::syntax::{Expr, Rat, State, StateDomain, Stmt};
use crate::transformers::{TransformError, TransformerKind};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Sim(#[from] SimError),
    /// A rule was invoked without an annotation it requires.
    #[error("rule `{rule}` requires the annotation field `{field}`")]
    MissingAssertion { rule: String, field: String },
    /// The domain does not bind a variable some checked expression reads.
    #[error("the domain does not bind `{var}`, which {what} reads")]
    DomainCoverage { var: String, what: String },
    /// A quantity assumed finite by the rule is infinite at a domain state.
    #[error("{what} must be finite on the domain but is infinite at ({state})")]
    InfiniteAt { what: String, state: String },
}

/// Termination-behaviour assertion supplied by the user. The engine cannot
/// prove these; it validates them by simulation and flags the evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AstAssertion {
    /// No termination claim.
    None,
    /// Every loop-body execution terminates almost surely.
    BodyAst,
    /// The loop as a whole terminates almost surely.
    LoopAst,
    /// The loop terminates positively almost surely (finite expected time).
    LoopPast,
}

impl std::str::FromStr for AstAssertion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(AstAssertion::None),
            "body-ast" => Ok(AstAssertion::BodyAst),
            "loop-ast" => Ok(AstAssertion::LoopAst),
            "loop-past" => Ok(AstAssertion::LoopPast),
            other => Err(format!(
                "unknown termination assertion `{other}` (expected none, body-ast, loop-ast, loop-past)"
            )),
        }
    }
}

/// Everything a proof rule needs: the loop, the claimed bound, and the
/// user's auxiliary assertions.
#[derive(Debug, Clone)]
pub struct AnnotationSet {
    /// The loop under analysis; must be a `while` statement.
    pub loop_stmt: Stmt,
    /// Post-expectation `f` (for `wp`) or continuation runtime `t` (for `ert`).
    pub post: Expr,
    /// Candidate invariant `I` — the bound being certified.
    pub invariant: Expr,
    /// Finite domain over which every side condition is checked.
    pub domain: StateDomain,
    /// Claimed bound `c` on the conditional expected one-iteration change.
    pub cdb_bound: Option<Rat>,
    /// Claimed almost-sure bound on the looping time, per state.
    pub looping_bound: Option<Expr>,
    /// Claimed bound on `f` / `I` (and `g` where used) for the
    /// bounded-expectation rules.
    pub bound_on_f: Option<Rat>,
    /// Scaling factor for the epsilon-comparison rules.
    pub epsilon: Option<Rat>,
    /// Auxiliary expectation: the guard-style expectation `[G]` or the
    /// comparison target `g`, depending on the rule variant.
    pub g: Option<Expr>,
    /// User termination assertion.
    pub ast: AstAssertion,
    /// Explicit truncation bounds for the value-iteration oracle; defaults
    /// to the domain bounds widened by a safety margin.
    pub truncation: Option<StateDomain>,
}

impl AnnotationSet {
    pub fn new(loop_stmt: Stmt, post: Expr, invariant: Expr, domain: StateDomain) -> Self {
        AnnotationSet {
            loop_stmt,
            post,
            invariant,
            domain,
            cdb_bound: None,
            looping_bound: None,
            bound_on_f: None,
            epsilon: None,
            g: None,
            ast: AstAssertion::None,
            truncation: None,
        }
    }

    /// Structural checks shared by every rule: the statement is a loop and
    /// the domain binds every variable the checked expressions read.
    pub fn validate(&self) -> Result<(), CertError> {
        crate::transformers::as_loop(&self.loop_stmt)?;
        let bound: std::collections::BTreeSet<_> = self.domain.vars().into_iter().collect();
        let check = |vars: Vec<crate::syntax::Var>, what: &str| -> Result<(), CertError> {
            for var in vars {
                if !bound.contains(&var) {
                    return Err(CertError::DomainCoverage {
                        var,
                        what: what.to_string(),
                    });
                }
            }
            Ok(())
        };
        let (guard, _) = crate::transformers::as_loop(&self.loop_stmt)?;
        check(guard.free_vars(), "the loop guard")?;
        check(self.post.free_vars(), "the post-expectation")?;
        check(self.invariant.free_vars(), "the invariant")?;
        if let Some(g) = &self.g {
            check(g.free_vars(), "the auxiliary expectation")?;
        }
        if let Some(n) = &self.looping_bound {
            check(n.free_vars(), "the looping-time bound")?;
        }
        Ok(())
    }
}

/// Overall outcome of a rule application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Accepted,
    Rejected,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Accepted => "ACCEPTED",
            Verdict::Rejected => "REJECTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

/// Outcome of one side condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConditionStatus {
    Passed,
    Failed,
    /// The check could not be decided — typically a comparison that failed
    /// only against a certified *lower* bound of the true value.
    Inconclusive,
}

/// One checked side condition, with its witness when it failed.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionResult {
    /// Stable identifier, e.g. `"subinvariance"` or `"cdb"`.
    pub name: String,
    pub status: ConditionStatus,
    /// Human-readable account of what was checked and what was found.
    pub detail: String,
    /// State (or value) witnessing a failure.
    pub witness: Option<String>,
    /// True when the condition rests on sampled trajectories rather than
    /// exact computation.
    pub simulation_based: bool,
}

impl ConditionResult {
    pub fn passed(&self) -> bool {
        self.status == ConditionStatus::Passed
    }
}

/// Summary of the independent value-iteration cross-check of a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    /// Domain states compared.
    pub checked_states: usize,
    /// States where value iteration converged (the comparison basis).
    pub converged_states: usize,
    /// True when no converged state contradicted the certified bound.
    pub agreed: bool,
    /// Largest contradiction found, 0 when agreed.
    pub max_violation: f64,
    /// State of the largest contradiction.
    pub worst_state: Option<String>,
    /// What was compared against what.
    pub note: String,
}

/// The deliverable of a rule application: verdict, per-condition outcomes,
/// caveats, and the oracle cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    /// Rule identifier, e.g. `"park-upper"` or `"ost-b"`.
    pub rule: String,
    pub kind: TransformerKind,
    pub verdict: Verdict,
    /// The claim this certificate establishes when ACCEPTED.
    pub certified: String,
    pub conditions: Vec<ConditionResult>,
    pub caveats: Vec<String>,
    pub oracle: Option<OracleSummary>,
    /// Witness state for a REJECTED verdict.
    pub witness: Option<String>,
}

/// Result of the conditional-difference-boundedness check.
#[derive(Debug, Clone)]
pub struct CdbReport {
    /// Maximum of the expected one-iteration change over the domain.
    pub max_delta: ExtReal,
    /// State attaining the maximum.
    pub argmax: Option<State>,
    /// Whether `max_delta <= c` for the claimed bound; `None` when no bound
    /// was claimed.
    pub passed: Option<bool>,
    /// True when some delta value was itself only a certified lower bound
    /// (nested-loop bodies cut off by truncation or iteration budgets).
    pub lower_bound_only: bool,
}
