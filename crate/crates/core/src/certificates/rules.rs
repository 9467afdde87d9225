//! The proof-rule engine: per-rule side-condition bundles, verdict
//! assembly, and the oracle cross-check of accepted certificates.
//!
//! Every prover runs *all* of its rule's side conditions (no
//! short-circuiting), so a rejection report still shows which conditions
//! held — the difference between "the invariant is not even a subinvariant"
//! and "the invariant is a subinvariant but its one-iteration change is
//! unbounded" matters to the user.

use super::conditions::{self, Direction};
use super::oracle::{self, Side};
use super::{
    AnnotationSet, AstAssertion, CertError, Certificate, ConditionResult, ConditionStatus,
    Verdict,
};
use crate::algebra::{eval, ExtReal};
use crate::simulator::SimConfig;
use crate::syntax::Rat;
use crate::transformers::{FixpointConfig, TransformerKind};

/// Tunable settings shared by all condition checkers and the oracle.
#[derive(Debug, Clone)]
pub struct CertConfig {
    /// Comparison tolerance for exact (rational) values.
    pub tol: f64,
    /// Comparison tolerance once floating-point values enter a comparison.
    pub float_tol: f64,
    /// Trajectories per state for simulation-evidence conditions.
    pub evidence_samples: u64,
    /// How many iterates the finite-iterate probe samples for nested loop
    /// bodies.
    pub probe_depth: u64,
    /// Tolerated shortfall from frequency 1 in termination evidence.
    pub ast_slack: f64,
    /// Widening margin applied to the domain bounds when the annotations do
    /// not pin an oracle truncation window.
    pub oracle_margin: i64,
    /// Simulation settings (seed, step cap, threads) for evidence checks.
    pub sim: SimConfig,
    /// Fixed-point settings for transformer evaluations inside conditions.
    pub fixpoint: FixpointConfig,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig {
            tol: 1e-9,
            float_tol: 1e-6,
            evidence_samples: 2_000,
            probe_depth: 5,
            ast_slack: 1e-3,
            oracle_margin: 128,
            sim: SimConfig::default(),
            fixpoint: FixpointConfig::default(),
        }
    }
}

/// The three optional-stopping lower-bound rule variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OstRule {
    /// Almost-surely bounded looping time.
    A,
    /// Finite expected looping time plus a conditional difference bound.
    B,
    /// Bounded post-expectation and invariant plus almost-sure termination.
    C,
}

impl OstRule {
    pub fn name(self) -> &'static str {
        match self {
            OstRule::A => "ost-a",
            OstRule::B => "ost-b",
            OstRule::C => "ost-c",
        }
    }
}

/// The bounded-expectation lower-bound rule variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MciverVariant {
    /// 0/1-valued invariant; certifies `T * I` where `T` is the loop's
    /// termination probability.
    One,
    /// 0/1 auxiliary expectation below the termination probability;
    /// certifies `[G] * I`.
    Two,
    /// Termination probability at least `epsilon` wherever it matters;
    /// certifies `I` itself.
    Three,
    /// Generalized variant: `epsilon * I <= wp(loop, g)` plus body
    /// termination replaces the harmonization requirement.
    Gen,
}

impl MciverVariant {
    pub fn name(self) -> &'static str {
        match self {
            MciverVariant::One => "mciver-1",
            MciverVariant::Two => "mciver-2",
            MciverVariant::Three => "mciver-3",
            MciverVariant::Gen => "mciver-gen",
        }
    }
}

fn require<'a, T>(v: &'a Option<T>, rule: &str, field: &str) -> Result<&'a T, CertError> {
    v.as_ref().ok_or_else(|| CertError::MissingAssertion {
        rule: rule.to_string(),
        field: field.to_string(),
    })
}

fn require_ast(
    ann: &AnnotationSet,
    rule: &str,
    at_least: AstAssertion,
    field: &str,
) -> Result<(), CertError> {
    if ann.ast < at_least {
        return Err(CertError::MissingAssertion {
            rule: rule.to_string(),
            field: field.to_string(),
        });
    }
    Ok(())
}

/// The invariant evaluated at every domain state — the per-state bound most
/// rules certify.
fn invariant_values(ann: &AnnotationSet) -> Result<Vec<ExtReal>, CertError> {
    ann.domain
        .enumerate()
        .iter()
        .map(|s| eval(&ann.invariant, s).map_err(CertError::from))
        .collect()
}

/// Converts the conditional-difference-boundedness report into a condition
/// result against the claimed bound. Exceeding the bound is decisive even
/// when the change values are lower bounds; respecting it is decisive only
/// when they are exact.
fn cdb_condition(
    ann: &AnnotationSet,
    claimed: &Rat,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let report = conditions::check_cdb(ann, cfg)?;
    let name = "cdb".to_string();
    Ok(match report.passed {
        Some(true) if report.lower_bound_only => ConditionResult {
            name,
            status: ConditionStatus::Inconclusive,
            detail: format!(
                "the largest expected one-iteration change found, {}, respects the claimed \
                 bound {claimed}, but some change values are only certified lower bounds",
                report.max_delta
            ),
            witness: None,
            simulation_based: false,
        },
        Some(true) => ConditionResult {
            name,
            status: ConditionStatus::Passed,
            detail: format!(
                "the expected one-iteration change of the invariant stays below the claimed \
                 bound {claimed} on the whole domain (maximum {})",
                report.max_delta
            ),
            witness: None,
            simulation_based: false,
        },
        _ => {
            let witness = report.argmax.as_ref().map(|s| s.to_string());
            ConditionResult {
                name,
                status: ConditionStatus::Failed,
                detail: format!(
                    "the expected one-iteration change of the invariant reaches {} at ({}), \
                     exceeding the claimed bound {claimed}",
                    report.max_delta,
                    witness.clone().unwrap_or_default()
                ),
                witness,
                simulation_based: false,
            }
        }
    })
}

struct OracleArgs {
    side: Side,
    /// Certified per-state bound, aligned with `domain.enumerate()`.
    bounds: Vec<ExtReal>,
    note: String,
}

/// Assembles the verdict from the condition outcomes, then — only for an
/// otherwise-accepted certificate — runs the independent value-iteration
/// cross-check and downgrades to INCONCLUSIVE on disagreement.
fn finish(
    rule: &str,
    kind: TransformerKind,
    certified: String,
    conditions: Vec<ConditionResult>,
    extra_caveats: Vec<String>,
    ann: &AnnotationSet,
    cfg: &CertConfig,
    oracle_args: OracleArgs,
) -> Result<Certificate, CertError> {
    let mut caveats = vec![format!(
        "all side conditions are checked over the {}-state annotation domain only",
        ann.domain.size()
    )];
    if conditions.iter().any(|c| c.simulation_based) {
        caveats.push(
            "termination-behaviour conditions rest on sampled trajectories (evidence, not proof)"
                .to_string(),
        );
    }
    caveats.extend(extra_caveats);
    let witness = conditions
        .iter()
        .find(|c| c.status == ConditionStatus::Failed)
        .and_then(|c| c.witness.clone());
    let mut verdict = if conditions
        .iter()
        .any(|c| c.status == ConditionStatus::Failed)
    {
        Verdict::Rejected
    } else if conditions
        .iter()
        .any(|c| c.status == ConditionStatus::Inconclusive)
    {
        Verdict::Inconclusive
    } else {
        Verdict::Accepted
    };
    let oracle = if verdict == Verdict::Accepted {
        let states = ann.domain.enumerate();
        let vi = oracle::vi_on(kind, &ann.loop_stmt, &ann.post, &states, ann, cfg)?;
        let summary = oracle::cross_check(
            oracle_args.side,
            &oracle_args.bounds,
            &states,
            &vi,
            oracle_args.note,
            cfg,
        );
        if !summary.agreed {
            verdict = Verdict::Inconclusive;
        }
        Some(summary)
    } else {
        None
    };
    debug_assert!(
        verdict != Verdict::Rejected || witness.is_some(),
        "a rejection must carry a witness"
    );
    Ok(Certificate {
        rule: rule.to_string(),
        kind,
        verdict,
        certified,
        conditions,
        caveats,
        oracle,
        witness,
    })
}

/// Upper-bound rule: a superinvariant dominates the loop's transformer
/// value. Works for both `wp` and `ert`; an infinite invariant is allowed
/// (it is the trivial upper bound).
pub fn prove_upper_park(
    kind: TransformerKind,
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<Certificate, CertError> {
    ann.validate()?;
    let sup = conditions::check_invariant(Direction::Super, kind, ann, cfg)?;
    let bounds = invariant_values(ann)?;
    finish(
        "park-upper",
        kind,
        format!("{}(loop, post) <= invariant at every domain state", kind.name()),
        vec![sup],
        vec![],
        ann,
        cfg,
        OracleArgs {
            side: Side::Upper,
            bounds,
            note: format!(
                "value-iterated {}(loop, post) compared against the invariant from below",
                kind.name()
            ),
        },
    )
}

/// Lower-bound rules built on optional stopping: a subinvariant is a lower
/// bound on `wp(loop, post)` provided the looping time and the invariant
/// are well-behaved enough, in one of three exchangeable senses.
pub fn prove_lower_ost(
    rule: OstRule,
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<Certificate, CertError> {
    ann.validate()?;
    let name = rule.name();
    let mut conds = Vec::new();
    match rule {
        OstRule::A => {
            require_ast(ann, name, AstAssertion::BodyAst, "ast (at least body-ast)")?;
            let bound = require(&ann.looping_bound, name, "looping_bound")?;
            conds.push(conditions::check_finite(
                "invariant-finite",
                &ann.invariant,
                "the invariant",
                ann,
            )?);
            conds.push(conditions::check_finite(
                "post-finite",
                &ann.post,
                "the post-expectation",
                ann,
            )?);
            conds.push(conditions::check_invariant(
                Direction::Sub,
                TransformerKind::Wp,
                ann,
                cfg,
            )?);
            conds.push(conditions::body_ast_evidence(ann, cfg)?);
            conds.push(conditions::looping_bound_evidence(ann, bound, cfg)?);
            conds.push(conditions::check_iterates_finite(ann, cfg)?);
        }
        OstRule::B => {
            require_ast(ann, name, AstAssertion::BodyAst, "ast (at least body-ast)")?;
            let claimed = require(&ann.cdb_bound, name, "cdb_bound")?;
            conds.push(conditions::check_finite(
                "invariant-finite",
                &ann.invariant,
                "the invariant",
                ann,
            )?);
            conds.push(conditions::check_finite(
                "post-finite",
                &ann.post,
                "the post-expectation",
                ann,
            )?);
            conds.push(conditions::check_invariant(
                Direction::Sub,
                TransformerKind::Wp,
                ann,
                cfg,
            )?);
            conds.push(conditions::body_ast_evidence(ann, cfg)?);
            conds.push(conditions::expected_looping_time_evidence(ann, cfg)?);
            conds.push(conditions::check_harmonization(ann, cfg)?);
            conds.push(conditions::check_char_image_finite(ann, cfg)?);
            conds.push(cdb_condition(ann, claimed, cfg)?);
        }
        OstRule::C => {
            require_ast(ann, name, AstAssertion::LoopAst, "ast (at least loop-ast)")?;
            let bound = require(&ann.bound_on_f, name, "bound_on_f")?;
            conds.push(conditions::check_bounded(
                "bounded-post",
                &ann.post,
                "the post-expectation",
                bound,
                ann,
                cfg,
            )?);
            conds.push(conditions::check_bounded(
                "bounded-invariant",
                &ann.invariant,
                "the invariant",
                bound,
                ann,
                cfg,
            )?);
            conds.push(conditions::check_invariant(
                Direction::Sub,
                TransformerKind::Wp,
                ann,
                cfg,
            )?);
            conds.push(conditions::loop_ast_evidence(ann, cfg)?);
        }
    }
    let bounds = invariant_values(ann)?;
    finish(
        name,
        TransformerKind::Wp,
        "invariant <= wp(loop, post) at every domain state".to_string(),
        conds,
        vec![],
        ann,
        cfg,
        OracleArgs {
            side: Side::Lower,
            bounds,
            note: "invariant compared against value-iterated wp(loop, post)".to_string(),
        },
    )
}

/// Lower-bound rules for bounded expectations. All variants require the
/// post-expectation and invariant to stay below the claimed bound and the
/// invariant to be a subinvariant; they differ in how termination enters.
pub fn prove_lower_mciver(
    variant: MciverVariant,
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<Certificate, CertError> {
    ann.validate()?;
    let name = variant.name();
    let bound = require(&ann.bound_on_f, name, "bound_on_f")?;
    let mut conds = vec![
        conditions::check_bounded(
            "bounded-post",
            &ann.post,
            "the post-expectation",
            bound,
            ann,
            cfg,
        )?,
        conditions::check_bounded(
            "bounded-invariant",
            &ann.invariant,
            "the invariant",
            bound,
            ann,
            cfg,
        )?,
        conditions::check_invariant(Direction::Sub, TransformerKind::Wp, ann, cfg)?,
    ];
    let mut extra_caveats = Vec::new();
    let states = ann.domain.enumerate();
    let (certified, bounds, note) = match variant {
        MciverVariant::One => {
            conds.push(conditions::check_harmonization(ann, cfg)?);
            conds.push(conditions::check_zero_one(
                "zero-one-invariant",
                &ann.invariant,
                "the invariant",
                ann,
                cfg,
            )?);
            let term = oracle::vi_on(
                TransformerKind::Wp,
                &ann.loop_stmt,
                &crate::syntax::Expr::int(1),
                &states,
                ann,
                cfg,
            )?;
            let mut bounds = Vec::with_capacity(states.len());
            for (s, tv) in states.iter().zip(term.iter()) {
                bounds.push(tv.value.mul(&eval(&ann.invariant, s)?)?);
            }
            extra_caveats.push(
                "the certified lower bound is the invariant scaled by the loop's termination \
                 probability, which is itself estimated by value iteration"
                    .to_string(),
            );
            (
                "termination-probability * invariant <= wp(loop, post) at every domain state"
                    .to_string(),
                bounds,
                "termination-probability-scaled invariant compared against value-iterated \
                 wp(loop, post)"
                    .to_string(),
            )
        }
        MciverVariant::Two => {
            let g = require(&ann.g, name, "g")?;
            conds.push(conditions::check_harmonization(ann, cfg)?);
            conds.push(conditions::check_zero_one(
                "zero-one-auxiliary",
                g,
                "the auxiliary expectation",
                ann,
                cfg,
            )?);
            conds.push(conditions::g_states_termination_evidence(ann, g, cfg)?);
            let mut bounds = Vec::with_capacity(states.len());
            for s in &states {
                bounds.push(eval(g, s)?.mul(&eval(&ann.invariant, s)?)?);
            }
            (
                "auxiliary-expectation * invariant <= wp(loop, post) at every domain state"
                    .to_string(),
                bounds,
                "auxiliary-scaled invariant compared against value-iterated wp(loop, post)"
                    .to_string(),
            )
        }
        MciverVariant::Three => {
            let eps = require(&ann.epsilon, name, "epsilon")?;
            conds.push(conditions::check_harmonization(ann, cfg)?);
            conds.push(conditions::epsilon_comparison(
                ann,
                eps,
                &crate::syntax::Expr::int(1),
                "epsilon-termination",
                cfg,
            )?);
            (
                "invariant <= wp(loop, post) at every domain state".to_string(),
                invariant_values(ann)?,
                "invariant compared against value-iterated wp(loop, post)".to_string(),
            )
        }
        MciverVariant::Gen => {
            let eps = require(&ann.epsilon, name, "epsilon")?;
            let g = require(&ann.g, name, "g")?;
            conds.push(conditions::check_bounded(
                "bounded-auxiliary",
                g,
                "the auxiliary expectation",
                bound,
                ann,
                cfg,
            )?);
            conds.push(conditions::body_ast_evidence(ann, cfg)?);
            conds.push(conditions::epsilon_comparison(
                ann,
                eps,
                g,
                "epsilon-comparison",
                cfg,
            )?);
            (
                "invariant <= wp(loop, post) at every domain state".to_string(),
                invariant_values(ann)?,
                "invariant compared against value-iterated wp(loop, post)".to_string(),
            )
        }
    };
    finish(
        name,
        TransformerKind::Wp,
        certified,
        conds,
        extra_caveats,
        ann,
        cfg,
        OracleArgs {
            side: Side::Lower,
            bounds,
            note,
        },
    )
}

/// Lower-bound rule for expected runtimes: a runtime subinvariant that
/// harmonizes with the continuation runtime and has conditionally bounded
/// one-iteration change is a lower bound on `ert(loop, post)`. No
/// termination assumption is needed.
pub fn prove_lower_ert(ann: &AnnotationSet, cfg: &CertConfig) -> Result<Certificate, CertError> {
    ann.validate()?;
    let name = "ert-lower";
    let claimed = require(&ann.cdb_bound, name, "cdb_bound")?;
    let conds = vec![
        conditions::check_finite("invariant-finite", &ann.invariant, "the invariant", ann)?,
        conditions::check_finite("post-finite", &ann.post, "the continuation runtime", ann)?,
        conditions::check_invariant(Direction::Sub, TransformerKind::Ert, ann, cfg)?,
        conditions::check_harmonization(ann, cfg)?,
        conditions::check_char_image_finite(ann, cfg)?,
        cdb_condition(ann, claimed, cfg)?,
    ];
    let bounds = invariant_values(ann)?;
    finish(
        name,
        TransformerKind::Ert,
        "invariant <= ert(loop, post) at every domain state".to_string(),
        conds,
        vec![],
        ann,
        cfg,
        OracleArgs {
            side: Side::Lower,
            bounds,
            note: "invariant compared against value-iterated ert(loop, post)".to_string(),
        },
    )
}
