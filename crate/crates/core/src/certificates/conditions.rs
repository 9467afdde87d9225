//! Mechanical checkers for the individual side conditions of the proof
//! rules: invariance inequalities, harmonization, boundedness and
//! finiteness, conditional difference bounds, and the simulation-backed
//! termination-behaviour checks.
//!
//! Checks that compare against a numerically computed transformer value
//! respect its certified-lower-bound semantics: a `<=`-style condition that
//! *passes* against a lower bound is sound, while one that *fails* only
//! against a lower bound is reported [`ConditionStatus::Inconclusive`]
//! rather than failed. The dual holds for `>=`-style conditions.

use super::rules::CertConfig;
use super::{AnnotationSet, CdbReport, CertError, ConditionResult, ConditionStatus};
use crate::algebra::{eval, eval_pred, eval_signed, ExtReal};
use crate::simulator::{
    estimate_induced_process, estimate_looping_time, estimate_termination_probability, SimConfig,
    SimError,
};
use crate::syntax::{Expr, Rat, State, Stmt};
use crate::transformers::{
    as_loop, char_value_at, eval_transformer, iterate_char, BoundedValue, FixpointConfig,
    TransformError, TransformerKind,
};
use std::cmp::Ordering;

/// Which inequality an invariant check certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `I <= Phi(I)` pointwise — a subinvariant, used by lower-bound rules.
    Sub,
    /// `Phi(I) <= I` pointwise — a superinvariant, used by the upper-bound
    /// rule.
    Super,
}

/// Comparison tolerance: exact values use the tight tolerance, comparisons
/// touched by floating point use the relaxed one.
pub(crate) fn tol_for(cfg: &CertConfig, float_seen: bool) -> f64 {
    if float_seen {
        cfg.float_tol
    } else {
        cfg.tol
    }
}

/// Simulation settings for evidence-grade checks: the shared seed, step cap
/// and thread count, but with the (smaller) per-state evidence sample count.
fn evidence_cfg(cfg: &CertConfig) -> SimConfig {
    SimConfig {
        samples: cfg.evidence_samples,
        ..cfg.sim.clone()
    }
}

fn cond(name: &str, status: ConditionStatus, detail: String) -> ConditionResult {
    ConditionResult {
        name: name.to_string(),
        status,
        detail,
        witness: None,
        simulation_based: false,
    }
}

fn failed_at(name: &str, detail: String, witness: &State) -> ConditionResult {
    ConditionResult {
        witness: Some(witness.to_string()),
        ..cond(name, ConditionStatus::Failed, detail)
    }
}

/// Checks `I <= Phi(I)` (Sub) or `Phi(I) <= I` (Super) at every domain
/// state, where `Phi` is the characteristic function of the annotated loop
/// for the given transformer and post-expectation.
pub fn check_invariant(
    direction: Direction,
    kind: TransformerKind,
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = match direction {
        Direction::Sub => "subinvariance",
        Direction::Super => "superinvariance",
    };
    let rel = match direction {
        Direction::Sub => "I <= Phi(I)",
        Direction::Super => "Phi(I) <= I",
    };
    let x_cont = |s2: &State| eval(&ann.invariant, s2).map_err(TransformError::from);
    let states = ann.domain.enumerate();
    let mut worst_fail: Option<(State, f64)> = None;
    let mut undecided: Option<(State, String)> = None;
    for s in &states {
        let here = eval(&ann.invariant, s)?;
        let (phi, flags) = char_value_at(kind, &ann.loop_stmt, &ann.post, &x_cont, s, &cfg.fixpoint)?;
        let lower_only = flags.truncated || flags.unconverged;
        let tol = tol_for(cfg, here.is_float() || phi.is_float());
        let (lhs, rhs) = match direction {
            Direction::Sub => (&here, &phi),
            Direction::Super => (&phi, &here),
        };
        if lhs.leq_with_tol(rhs, tol) {
            // Passing against a lower bound of Phi(I) proves Sub but not
            // Super: the true Phi(I) may exceed the computed value.
            if direction == Direction::Super && lower_only && undecided.is_none() {
                undecided = Some((
                    s.clone(),
                    "Phi(I) could only be computed as a certified lower bound here, \
                     so `Phi(I) <= I` is not decided"
                        .to_string(),
                ));
            }
        } else {
            let gap = lhs.gap_above(rhs).to_f64();
            // Failing against a lower bound of Phi(I) is decisive for Super
            // but not for Sub: the true Phi(I) may still lie above I.
            if direction == Direction::Sub && lower_only {
                if undecided.is_none() {
                    undecided = Some((
                        s.clone(),
                        format!(
                            "I exceeds a certified lower bound of Phi(I) by {gap:.3e}, \
                             which does not refute `I <= Phi(I)`"
                        ),
                    ));
                }
            } else if worst_fail.as_ref().map_or(true, |(_, g)| gap > *g) {
                worst_fail = Some((s.clone(), gap));
            }
        }
    }
    Ok(if let Some((s, gap)) = worst_fail {
        failed_at(
            name,
            format!(
                "{rel} fails by {gap:.3e} at ({s}) for the {} characteristic function",
                kind.name()
            ),
            &s,
        )
    } else if let Some((s, why)) = undecided {
        cond(
            name,
            ConditionStatus::Inconclusive,
            format!("at ({s}): {why}"),
        )
    } else {
        cond(
            name,
            ConditionStatus::Passed,
            format!(
                "{rel} holds at all {} domain states for the {} characteristic function",
                states.len(),
                kind.name()
            ),
        )
    })
}

/// Checks that the invariant agrees with the post-expectation on every
/// guard-false domain state (exactly for rationals, within tolerance once
/// floats are involved).
pub fn check_harmonization(ann: &AnnotationSet, cfg: &CertConfig) -> Result<ConditionResult, CertError> {
    let name = "harmonization";
    let (guard, _) = as_loop(&ann.loop_stmt)?;
    let mut checked = 0usize;
    let mut worst: Option<(State, f64)> = None;
    for s in ann.domain.enumerate() {
        if eval_pred(guard, &s)? {
            continue;
        }
        checked += 1;
        let iv = eval(&ann.invariant, &s)?;
        let fv = eval(&ann.post, &s)?;
        let tol = tol_for(cfg, iv.is_float() || fv.is_float());
        if !(iv.leq_with_tol(&fv, tol) && fv.leq_with_tol(&iv, tol)) {
            let gap = iv.gap_above(&fv).max(&fv.gap_above(&iv)).to_f64();
            if worst.as_ref().map_or(true, |(_, g)| gap > *g) {
                worst = Some((s, gap));
            }
        }
    }
    Ok(match worst {
        Some((s, gap)) => failed_at(
            name,
            format!(
                "the invariant must equal the post-expectation where the guard is false, \
                 but differs by {gap:.3e} at ({s})"
            ),
            &s,
        ),
        None if checked == 0 => cond(
            name,
            ConditionStatus::Passed,
            "no domain state falsifies the guard, so harmonization holds vacuously".to_string(),
        ),
        None => cond(
            name,
            ConditionStatus::Passed,
            format!("invariant equals the post-expectation at all {checked} guard-false domain states"),
        ),
    })
}

/// The expected one-iteration change of the invariant at `s`:
/// `[guard](s) * wp(body, |I - I(s)|)(s)`. Zero (exactly) at guard-false
/// states; errors if the invariant is infinite at a guard-true state.
pub fn delta(
    invariant: &Expr,
    loop_stmt: &Stmt,
    s: &State,
    cfg: &FixpointConfig,
) -> Result<BoundedValue, CertError> {
    let (guard, body) = as_loop(loop_stmt)?;
    if !eval_pred(guard, s)? {
        return Ok(BoundedValue {
            value: ExtReal::zero(),
            converged: true,
            iterations: 0,
            is_lower_bound_only: false,
        });
    }
    let here = eval(invariant, s)?;
    let here_rat = match &here {
        ExtReal::Rat(r) => r.clone(),
        ExtReal::Float(x) => Rat::from_float(*x).ok_or_else(|| CertError::InfiniteAt {
            what: "the invariant".to_string(),
            state: s.to_string(),
        })?,
        ExtReal::Infinity => {
            return Err(CertError::InfiniteAt {
                what: "the invariant".to_string(),
                state: s.to_string(),
            })
        }
    };
    let diff = Expr::Abs(Box::new(Expr::Sub(
        Box::new(invariant.clone()),
        Box::new(Expr::Const(here_rat)),
    )));
    Ok(eval_transformer(TransformerKind::Wp, body, &diff, s, cfg)?)
}

/// Computes the maximum expected one-iteration change of the invariant over
/// the domain and compares it against the claimed bound, if any.
pub fn check_cdb(ann: &AnnotationSet, cfg: &CertConfig) -> Result<CdbReport, CertError> {
    let mut max_delta = ExtReal::zero();
    let mut argmax: Option<State> = None;
    let mut lower_bound_only = false;
    for s in ann.domain.enumerate() {
        let bv = match delta(&ann.invariant, &ann.loop_stmt, &s, &cfg.fixpoint) {
            Ok(bv) => bv,
            // An infinite invariant value makes the one-iteration change
            // unbounded outright.
            Err(CertError::InfiniteAt { .. }) => {
                return Ok(CdbReport {
                    max_delta: ExtReal::Infinity,
                    argmax: Some(s),
                    passed: ann.cdb_bound.as_ref().map(|_| false),
                    lower_bound_only,
                });
            }
            Err(e) => return Err(e),
        };
        lower_bound_only |= bv.is_lower_bound_only;
        if bv.value.cmp_exact(&max_delta) == Ordering::Greater {
            max_delta = bv.value;
            argmax = Some(s);
        }
    }
    let passed = ann.cdb_bound.as_ref().map(|c| {
        let bound = ExtReal::from_rat(c.clone());
        max_delta.leq_with_tol(&bound, tol_for(cfg, max_delta.is_float()))
    });
    Ok(CdbReport {
        max_delta,
        argmax,
        passed,
        lower_bound_only,
    })
}

/// Checks `expr <= bound` at every domain state.
pub(crate) fn check_bounded(
    name: &str,
    expr: &Expr,
    describe: &str,
    bound: &Rat,
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let bound_v = ExtReal::from_rat(bound.clone());
    let mut worst: Option<(State, f64)> = None;
    let states = ann.domain.enumerate();
    for s in &states {
        let v = eval(expr, s)?;
        if !v.leq_with_tol(&bound_v, tol_for(cfg, v.is_float())) {
            let gap = v.gap_above(&bound_v).to_f64();
            if worst.as_ref().map_or(true, |(_, g)| gap > *g) {
                worst = Some((s.clone(), gap));
            }
        }
    }
    Ok(match worst {
        Some((s, gap)) => failed_at(
            name,
            format!("{describe} exceeds the claimed bound {bound} by {gap:.3e} at ({s})"),
            &s,
        ),
        None => cond(
            name,
            ConditionStatus::Passed,
            format!(
                "{describe} stays below the claimed bound {bound} at all {} domain states",
                states.len()
            ),
        ),
    })
}

/// Checks `expr < infinity` at every domain state.
pub(crate) fn check_finite(
    name: &str,
    expr: &Expr,
    describe: &str,
    ann: &AnnotationSet,
) -> Result<ConditionResult, CertError> {
    let states = ann.domain.enumerate();
    for s in &states {
        if !eval(expr, s)?.is_finite() {
            return Ok(failed_at(
                name,
                format!("{describe} is infinite at ({s})"),
                s,
            ));
        }
    }
    Ok(cond(
        name,
        ConditionStatus::Passed,
        format!("{describe} is finite at all {} domain states", states.len()),
    ))
}

/// Checks that `expr` only takes the values 0 and 1 on the domain.
pub(crate) fn check_zero_one(
    name: &str,
    expr: &Expr,
    describe: &str,
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let zero = ExtReal::zero();
    let one = ExtReal::one();
    let states = ann.domain.enumerate();
    for s in &states {
        let v = eval(expr, s)?;
        let tol = tol_for(cfg, v.is_float());
        let is_zero = v.leq_with_tol(&zero, tol);
        let is_one = v.leq_with_tol(&one, tol) && one.leq_with_tol(&v, tol);
        if !is_zero && !is_one {
            return Ok(failed_at(
                name,
                format!("{describe} takes the value {v} at ({s}), which is neither 0 nor 1"),
                s,
            ));
        }
    }
    Ok(cond(
        name,
        ConditionStatus::Passed,
        format!(
            "{describe} only takes the values 0 and 1 on all {} domain states",
            states.len()
        ),
    ))
}

/// Checks that one application of the `wp` characteristic function to the
/// invariant is finite at every domain state. An infinite computed value is
/// decisive (the computation never overshoots); a finite value decides the
/// condition only when it is not merely a certified lower bound.
pub(crate) fn check_char_image_finite(
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = "char-image-finite";
    let x_cont = |s2: &State| eval(&ann.invariant, s2).map_err(TransformError::from);
    let states = ann.domain.enumerate();
    let mut undecided: Option<State> = None;
    for s in &states {
        let (v, flags) = char_value_at(
            TransformerKind::Wp,
            &ann.loop_stmt,
            &ann.post,
            &x_cont,
            s,
            &cfg.fixpoint,
        )?;
        if !v.is_finite() {
            return Ok(failed_at(
                name,
                format!("the wp characteristic function maps the invariant to infinity at ({s})"),
                s,
            ));
        }
        if (flags.truncated || flags.unconverged) && undecided.is_none() {
            undecided = Some(s.clone());
        }
    }
    Ok(match undecided {
        Some(s) => cond(
            name,
            ConditionStatus::Inconclusive,
            format!(
                "the characteristic value at ({s}) is finite but only a certified lower bound, \
                 so finiteness of the true value is not decided"
            ),
        ),
        None => cond(
            name,
            ConditionStatus::Passed,
            format!(
                "the wp characteristic function maps the invariant to finite values at all {} \
                 domain states",
                states.len()
            ),
        ),
    })
}

/// Checks that every iterate of the characteristic function stays finite.
/// Certain for loop-free bodies (a finite combination of finite values);
/// for nested bodies the first few iterates are probed by sampling the
/// stopped-and-filled process, which is evidence rather than proof.
pub(crate) fn check_iterates_finite(
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = "iterate-finiteness";
    let (_, body) = as_loop(&ann.loop_stmt)?;
    if body.is_loop_free() {
        return Ok(cond(
            name,
            ConditionStatus::Passed,
            "the loop body is loop-free, so every iterate of the characteristic function is a \
             finite combination of the (finite) invariant and post-expectation"
                .to_string(),
        ));
    }
    let sim = evidence_cfg(cfg);
    let states = ann.domain.enumerate();
    for s in &states {
        for n in 0..cfg.probe_depth {
            match estimate_induced_process(&ann.loop_stmt, &ann.post, &ann.invariant, n, s, &sim) {
                Ok(_) => {}
                Err(SimError::InfiniteSample { state }) => {
                    return Ok(ConditionResult {
                        witness: Some(state.clone()),
                        simulation_based: true,
                        ..cond(
                            name,
                            ConditionStatus::Failed,
                            format!(
                                "sampling iterate {n} from ({s}) reached ({state}), where the \
                                 stopped process is infinite"
                            ),
                        )
                    });
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(ConditionResult {
        simulation_based: true,
        ..cond(
            name,
            ConditionStatus::Passed,
            format!(
                "sampled the first {} iterates at all {} domain states without encountering an \
                 infinite value (evidence, not proof)",
                cfg.probe_depth,
                states.len()
            ),
        )
    })
}

/// Evidence that every execution of the loop body terminates. Certain for
/// loop-free bodies; sampled otherwise.
pub(crate) fn body_ast_evidence(
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = "body-termination";
    let (_, body) = as_loop(&ann.loop_stmt)?;
    if body.is_loop_free() {
        return Ok(cond(
            name,
            ConditionStatus::Passed,
            "the loop body is loop-free and terminates on every input".to_string(),
        ));
    }
    let sim = evidence_cfg(cfg);
    let states = ann.domain.enumerate();
    for s in &states {
        let est = estimate_termination_probability(body, s, &sim)?;
        if est.mean < 1.0 - cfg.ast_slack {
            return Ok(ConditionResult {
                simulation_based: true,
                ..failed_at(
                    name,
                    format!(
                        "sampled body termination frequency {:.4} at ({s}) contradicts the \
                         asserted almost-sure termination (step cap {})",
                        est.mean, sim.step_cap
                    ),
                    s,
                )
            });
        }
    }
    Ok(ConditionResult {
        simulation_based: true,
        ..cond(
            name,
            ConditionStatus::Passed,
            format!(
                "sampled body termination frequency is 1 at all {} domain states ({} \
                 trajectories per state)",
                states.len(),
                sim.samples
            ),
        )
    })
}

/// Evidence that the loop as a whole terminates almost surely from every
/// domain state.
pub(crate) fn loop_ast_evidence(
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = "loop-termination";
    let sim = evidence_cfg(cfg);
    let states = ann.domain.enumerate();
    for s in &states {
        let est = estimate_termination_probability(&ann.loop_stmt, s, &sim)?;
        if est.mean < 1.0 - cfg.ast_slack {
            return Ok(ConditionResult {
                simulation_based: true,
                ..failed_at(
                    name,
                    format!(
                        "sampled termination frequency {:.4} at ({s}) contradicts the asserted \
                         almost-sure termination (step cap {})",
                        est.mean, sim.step_cap
                    ),
                    s,
                )
            });
        }
    }
    Ok(ConditionResult {
        simulation_based: true,
        ..cond(
            name,
            ConditionStatus::Passed,
            format!(
                "sampled loop termination frequency is 1 at all {} domain states ({} \
                 trajectories per state)",
                states.len(),
                sim.samples
            ),
        )
    })
}

/// Evidence that the loop's expected looping time is finite from every
/// domain state: all sampled trajectories leave the loop within the step
/// cap.
pub(crate) fn expected_looping_time_evidence(
    ann: &AnnotationSet,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = "finite-expected-looping-time";
    let sim = evidence_cfg(cfg);
    let states = ann.domain.enumerate();
    let mut max_mean = 0.0f64;
    for s in &states {
        let lt = estimate_looping_time(&ann.loop_stmt, s, &sim)?;
        if lt.termination_frequency < 1.0 - cfg.ast_slack {
            return Ok(ConditionResult {
                simulation_based: true,
                ..failed_at(
                    name,
                    format!(
                        "only a fraction {:.4} of sampled trajectories left the loop from ({s}) \
                         within the step cap {}, contradicting a finite expected looping time",
                        lt.termination_frequency, sim.step_cap
                    ),
                    s,
                )
            });
        }
        max_mean = max_mean.max(lt.time.mean);
    }
    Ok(ConditionResult {
        simulation_based: true,
        ..cond(
            name,
            ConditionStatus::Passed,
            format!(
                "all sampled trajectories left the loop; largest mean looping time {:.2} over \
                 {} domain states",
                max_mean,
                states.len()
            ),
        )
    })
}

/// Evidence that the looping time is almost surely bounded by the claimed
/// per-state bound: every sampled trajectory terminates and none loops
/// longer than the bound evaluated at its start state.
pub(crate) fn looping_bound_evidence(
    ann: &AnnotationSet,
    bound: &Expr,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = "looping-time-bound";
    let sim = evidence_cfg(cfg);
    let states = ann.domain.enumerate();
    let mut largest_observed = 0u64;
    for s in &states {
        let bound_v = eval_signed(bound, s)?;
        let lt = estimate_looping_time(&ann.loop_stmt, s, &sim)?;
        if lt.termination_frequency < 1.0 {
            return Ok(ConditionResult {
                simulation_based: true,
                ..failed_at(
                    name,
                    format!(
                        "a sampled trajectory from ({s}) did not leave the loop within the step \
                         cap {}, contradicting the claimed almost-sure looping-time bound",
                        sim.step_cap
                    ),
                    s,
                )
            });
        }
        let observed = ExtReal::from_int(lt.max_observed as i64);
        if !observed.leq_with_tol(&bound_v, tol_for(cfg, bound_v.is_float())) {
            return Ok(ConditionResult {
                simulation_based: true,
                ..failed_at(
                    name,
                    format!(
                        "a sampled trajectory from ({s}) looped {} times, exceeding the claimed \
                         bound {bound_v}",
                        lt.max_observed
                    ),
                    s,
                )
            });
        }
        largest_observed = largest_observed.max(lt.max_observed);
    }
    Ok(ConditionResult {
        simulation_based: true,
        ..cond(
            name,
            ConditionStatus::Passed,
            format!(
                "every sampled trajectory respected the claimed looping-time bound (largest \
                 observed looping time {largest_observed} over {} domain states)",
                states.len()
            ),
        )
    })
}

/// Evidence that the loop terminates almost surely from every domain state
/// where the auxiliary 0/1 expectation holds.
pub(crate) fn g_states_termination_evidence(
    ann: &AnnotationSet,
    g: &Expr,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let name = "termination-where-auxiliary-holds";
    let sim = evidence_cfg(cfg);
    let one = ExtReal::one();
    let mut checked = 0usize;
    for s in ann.domain.enumerate() {
        let gv = eval(g, &s)?;
        if !one.leq_with_tol(&gv, tol_for(cfg, gv.is_float())) {
            continue;
        }
        checked += 1;
        let est = estimate_termination_probability(&ann.loop_stmt, &s, &sim)?;
        if est.mean < 1.0 - cfg.ast_slack {
            return Ok(ConditionResult {
                simulation_based: true,
                ..failed_at(
                    name,
                    format!(
                        "the auxiliary expectation holds at ({s}) but the sampled termination \
                         frequency is only {:.4} (step cap {})",
                        est.mean, sim.step_cap
                    ),
                    &s,
                )
            });
        }
    }
    Ok(ConditionResult {
        simulation_based: true,
        ..cond(
            name,
            ConditionStatus::Passed,
            format!(
                "sampled termination frequency is 1 at all {checked} domain states where the \
                 auxiliary expectation holds"
            ),
        )
    })
}

/// Checks `epsilon * I <= wp(loop, g)` at every domain state, with the
/// right-hand side obtained by value iteration under the oracle truncation.
/// A failure against a value that is only a certified lower bound is
/// inconclusive rather than decisive.
pub(crate) fn epsilon_comparison(
    ann: &AnnotationSet,
    eps: &Rat,
    g: &Expr,
    name: &str,
    cfg: &CertConfig,
) -> Result<ConditionResult, CertError> {
    let states = ann.domain.enumerate();
    let vi = super::oracle::vi_on(TransformerKind::Wp, &ann.loop_stmt, g, &states, ann, cfg)?;
    let eps_v = ExtReal::from_rat(eps.clone());
    let mut worst_fail: Option<(State, f64)> = None;
    let mut undecided: Option<(State, f64)> = None;
    for (s, bv) in states.iter().zip(vi.iter()) {
        let lhs = eps_v.mul(&eval(&ann.invariant, s)?)?;
        if !bv.converged {
            if undecided.is_none() {
                undecided = Some((s.clone(), f64::NAN));
            }
            continue;
        }
        let tol = tol_for(cfg, lhs.is_float() || bv.value.is_float());
        if lhs.leq_with_tol(&bv.value, tol) {
            continue;
        }
        let gap = lhs.gap_above(&bv.value).to_f64();
        if bv.is_lower_bound_only {
            if undecided.is_none() {
                undecided = Some((s.clone(), gap));
            }
        } else if worst_fail.as_ref().map_or(true, |(_, g2)| gap > *g2) {
            worst_fail = Some((s.clone(), gap));
        }
    }
    Ok(if let Some((s, gap)) = worst_fail {
        failed_at(
            name,
            format!(
                "epsilon * I exceeds the value-iterated wp of the comparison expectation by \
                 {gap:.3e} at ({s})"
            ),
            &s,
        )
    } else if let Some((s, gap)) = undecided {
        let why = if gap.is_nan() {
            "value iteration did not converge there".to_string()
        } else {
            format!(
                "epsilon * I exceeds a certified lower bound of the wp value by {gap:.3e}, \
                 which is not decisive"
            )
        };
        cond(
            name,
            ConditionStatus::Inconclusive,
            format!("at ({s}): {why}"),
        )
    } else {
        cond(
            name,
            ConditionStatus::Passed,
            format!(
                "epsilon * I <= wp(loop, g) holds at all {} domain states (right-hand side from \
                 value iteration; passing against its certified lower bounds is sound)",
                states.len()
            ),
        )
    })
}

/// One state's entry in the uniform-integrability probe.
#[derive(Debug, Clone)]
pub struct UiStateReport {
    pub state: State,
    /// Value-iterated transformer value (the fixed point being approached).
    pub lfp: ExtReal,
    /// The iterates `I, Phi(I), …, Phi^n(I)` observed at this state.
    pub iterates: Vec<ExtReal>,
    /// Absolute gap between the last iterate and the fixed point.
    pub final_gap: f64,
}

/// Diagnostic probe for the uniform-integrability style premises: runs the
/// symbolic iterates of the `wp` characteristic function from the invariant
/// and compares them against the value-iterated fixed point. A gap that is
/// bounded away from zero reveals that the iterates converge to something
/// other than the transformer value (so the invariant cannot be justified
/// by a passing-to-the-limit argument). This is evidence, never a proof.
#[derive(Debug, Clone)]
pub struct UiReport {
    pub per_state: Vec<UiStateReport>,
    /// Largest final gap over the domain.
    pub max_final_gap: f64,
}

pub fn check_uniform_integrability_empirical(
    ann: &AnnotationSet,
    n_max: usize,
    cfg: &CertConfig,
) -> Result<UiReport, CertError> {
    let iterates_sym = iterate_char(
        TransformerKind::Wp,
        &ann.loop_stmt,
        &ann.post,
        &ann.invariant,
        n_max,
    )?;
    let states = ann.domain.enumerate();
    let lfp = super::oracle::vi_on(TransformerKind::Wp, &ann.loop_stmt, &ann.post, &states, ann, cfg)?;
    let mut per_state = Vec::with_capacity(states.len());
    let mut max_final_gap = 0.0f64;
    for (i, s) in states.iter().enumerate() {
        let mut vals = Vec::with_capacity(iterates_sym.len());
        for e in &iterates_sym {
            vals.push(eval(e, s)?);
        }
        let last = vals.last().cloned().unwrap_or_else(ExtReal::zero);
        let fixed = lfp[i].value.clone();
        let final_gap = last.gap_above(&fixed).max(&fixed.gap_above(&last)).to_f64();
        max_final_gap = max_final_gap.max(final_gap);
        per_state.push(UiStateReport {
            state: s.clone(),
            lfp: fixed,
            iterates: vals,
            final_gap,
        });
    }
    Ok(UiReport {
        per_state,
        max_final_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::AnnotationSet;
    use crate::syntax::parser::{parse_domain, parse_expectation, parse_program};

    const GEO: &str = "while (a != 0) { { a := 0 } [1/2] { b := b + 1 } }";
    const CEX: &str = "while (a != 0) { { a := 0 } [1/2] { b := b + 1 }; k := k + 1 }";
    const COUPON_LOOP: &str =
        "while (0 < x) { i := 4; while (x < i) { i := unif(1..3) }; x := x - 1 }";
    const COUPON_I: &str =
        "[0 < x and x <= 3] * 3 * harm(x) + [3 < x] * (3 * harm(3) + 3 - x)";

    fn ann(prog: &str, post: &str, invariant: &str, domain: &str) -> AnnotationSet {
        AnnotationSet::new(
            parse_program(prog).unwrap(),
            parse_expectation(post).unwrap(),
            parse_expectation(invariant).unwrap(),
            parse_domain(domain).unwrap(),
        )
    }

    fn cfg() -> CertConfig {
        CertConfig {
            evidence_samples: 400,
            ..CertConfig::default()
        }
    }

    #[test]
    fn exact_fixed_point_is_both_sub_and_superinvariant() {
        let a = ann(GEO, "b", "b + [a != 0]", "a in {0, 1}; b in 0..20");
        let sub = check_invariant(Direction::Sub, TransformerKind::Wp, &a, &cfg()).unwrap();
        let sup = check_invariant(Direction::Super, TransformerKind::Wp, &a, &cfg()).unwrap();
        assert_eq!(sub.status, ConditionStatus::Passed, "{}", sub.detail);
        assert_eq!(sup.status, ConditionStatus::Passed, "{}", sup.detail);
    }

    #[test]
    fn superinvariance_fails_for_a_strict_lower_bound() {
        let a = ann(GEO, "b", "b", "a in {0, 1}; b in 0..20");
        let sup = check_invariant(Direction::Super, TransformerKind::Wp, &a, &cfg()).unwrap();
        assert_eq!(sup.status, ConditionStatus::Failed);
        let w = sup.witness.expect("failure must carry a witness");
        assert!(w.contains("a=1"), "witness should be a guard-true state: {w}");
    }

    #[test]
    fn unsound_greater_fixed_point_still_passes_subinvariance() {
        // An exact fixed point strictly above the least one: subinvariance
        // alone cannot tell them apart.
        let a = ann(
            CEX,
            "b",
            "b + [a != 0] * (1 + 2^k)",
            "a in {0, 1}; b in 0..10; k in 0..10",
        );
        let sub = check_invariant(Direction::Sub, TransformerKind::Wp, &a, &cfg()).unwrap();
        assert_eq!(sub.status, ConditionStatus::Passed, "{}", sub.detail);
    }

    #[test]
    fn harmonization_checks_guard_false_agreement() {
        let good = ann(GEO, "b", "b + [a != 0]", "a in {0, 1}; b in 0..20");
        let r = check_harmonization(&good, &cfg()).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);

        let bad = ann(GEO, "b", "b + 1", "a in {0, 1}; b in 0..20");
        let r = check_harmonization(&bad, &cfg()).unwrap();
        assert_eq!(r.status, ConditionStatus::Failed);
        assert!(r.witness.unwrap().contains("a=0"));
    }

    #[test]
    fn delta_is_exactly_zero_at_guard_false_states() {
        let a = ann(GEO, "b", "b + [a != 0]", "a in {0, 1}; b in 0..20");
        let s = State::new().bind("a", 0).bind("b", 7);
        let bv = delta(&a.invariant, &a.loop_stmt, &s, &cfg().fixpoint).unwrap();
        assert_eq!(bv.value, ExtReal::zero());
        assert!(bv.converged);
        assert!(!bv.is_lower_bound_only);
    }

    #[test]
    fn delta_values_for_the_two_fixed_points() {
        let c = cfg();
        let inv = parse_expectation("b + [a != 0]").unwrap();
        let loop_stmt = parse_program(CEX).unwrap();
        let s = State::new().bind("a", 1).bind("b", 0).bind("k", 0);
        let bv = delta(&inv, &loop_stmt, &s, &c.fixpoint).unwrap();
        assert_eq!(bv.value, ExtReal::one(), "expected change exactly 1");

        let inv2 = parse_expectation("b + [a != 0] * (1 + 2^k)").unwrap();
        let s10 = State::new().bind("a", 1).bind("b", 0).bind("k", 10);
        let bv2 = delta(&inv2, &loop_stmt, &s10, &c.fixpoint).unwrap();
        assert_eq!(bv2.value, ExtReal::from_int(1025), "1 + 2^10 = 1025");
    }

    #[test]
    fn delta_errors_on_an_infinite_invariant_at_a_guard_true_state() {
        let inv = parse_expectation("inf * [a != 0]").unwrap();
        let loop_stmt = parse_program(GEO).unwrap();
        let s = State::new().bind("a", 1).bind("b", 0);
        let err = delta(&inv, &loop_stmt, &s, &cfg().fixpoint).unwrap_err();
        assert!(matches!(err, CertError::InfiniteAt { .. }), "{err}");
    }

    #[test]
    fn cdb_report_for_the_sound_invariant() {
        let mut a = ann(
            CEX,
            "b",
            "b + [a != 0]",
            "a in {0, 1}; b in 0..10; k in 0..10",
        );
        a.cdb_bound = Some(Rat::from_integer(1.into()));
        let report = check_cdb(&a, &cfg()).unwrap();
        assert_eq!(report.max_delta, ExtReal::one());
        assert_eq!(report.passed, Some(true));
        assert!(!report.lower_bound_only);
    }

    #[test]
    fn cdb_report_pins_the_worst_state_of_the_unbounded_invariant() {
        let mut a = ann(
            CEX,
            "b",
            "b + [a != 0] * (1 + 2^k)",
            "a in {0, 1}; b in 0..10; k in 0..10",
        );
        a.cdb_bound = Some(Rat::from_integer(1024.into()));
        let report = check_cdb(&a, &cfg()).unwrap();
        assert_eq!(report.max_delta, ExtReal::from_int(1025));
        assert_eq!(report.passed, Some(false));
        let argmax = report.argmax.unwrap().to_string();
        assert_eq!(argmax, "a=1, b=0, k=10");
    }

    #[test]
    fn cdb_handles_a_nested_loop_body_exactly() {
        let mut a = ann(COUPON_LOOP, "0", COUPON_I, "x in 0..6");
        a.cdb_bound = Some(Rat::new(7.into(), 2.into()));
        let report = check_cdb(&a, &cfg()).unwrap();
        // Largest expected one-iteration change: |I(0) - I(1)| = 3 at x = 1.
        let max = report.max_delta.to_f64();
        assert!((max - 3.0).abs() < 1e-6, "max delta {max}");
        assert_eq!(report.argmax.unwrap().to_string(), "x=1");
        assert_eq!(report.passed, Some(true));
    }

    #[test]
    fn bounded_finite_and_zero_one_checks() {
        let a = ann(GEO, "b", "[a != 0]", "a in {0, 1}; b in 0..5");
        let c = cfg();
        let one = Rat::from_integer(1.into());
        let r = check_bounded("bounded-invariant", &a.invariant, "the invariant", &one, &a, &c)
            .unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);
        let r = check_bounded("bounded-post", &a.post, "the post-expectation", &one, &a, &c)
            .unwrap();
        assert_eq!(r.status, ConditionStatus::Failed);
        assert!(r.witness.unwrap().contains("b=5"), "worst exceeding state");

        let inf = parse_expectation("inf * [a != 0]").unwrap();
        let r = check_finite("invariant-finite", &inf, "the invariant", &a).unwrap();
        assert_eq!(r.status, ConditionStatus::Failed);
        let r = check_finite("post-finite", &a.post, "the post-expectation", &a).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed);

        let r = check_zero_one("zero-one-invariant", &a.invariant, "the invariant", &a, &c)
            .unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);
        let r = check_zero_one("zero-one-invariant", &a.post, "the post-expectation", &a, &c)
            .unwrap();
        assert_eq!(r.status, ConditionStatus::Failed);
    }

    #[test]
    fn char_image_finiteness_is_decisive_for_loop_free_bodies() {
        let a = ann(
            CEX,
            "b",
            "b + [a != 0] * (1 + 2^k)",
            "a in {0, 1}; b in 0..5; k in 0..5",
        );
        let r = check_char_image_finite(&a, &cfg()).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);

        let bad = ann("while (x > 0) { skip }", "0", "inf", "x in 0..1");
        let r = check_char_image_finite(&bad, &cfg()).unwrap();
        assert_eq!(r.status, ConditionStatus::Failed);
        assert!(r.witness.unwrap().contains("x=1"));
    }

    #[test]
    fn iterate_probe_is_certain_for_loop_free_bodies_and_sampled_otherwise() {
        let a = ann(GEO, "b", "b + [a != 0]", "a in {0, 1}; b in 0..3");
        let r = check_iterates_finite(&a, &cfg()).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed);
        assert!(!r.simulation_based);

        let nested = ann(COUPON_LOOP, "0", COUPON_I, "x in 0..3");
        let mut c = cfg();
        c.evidence_samples = 50;
        let r = check_iterates_finite(&nested, &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);
        assert!(r.simulation_based);
    }

    #[test]
    fn termination_evidence_for_the_loop_and_its_body() {
        let a = ann(GEO, "b", "b + [a != 0]", "a in {0, 1}; b in 0..3");
        let c = cfg();
        let r = body_ast_evidence(&a, &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed);
        assert!(!r.simulation_based, "loop-free body needs no sampling");

        let r = loop_ast_evidence(&a, &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);
        assert!(r.simulation_based);

        let mut c_small = c.clone();
        c_small.sim.step_cap = 1_000;
        c_small.evidence_samples = 50;
        let diverge = ann("while (true) { skip }", "1", "1", "x in 0..0");
        let r = loop_ast_evidence(&diverge, &c_small).unwrap();
        assert_eq!(r.status, ConditionStatus::Failed);
        assert!(r.detail.contains("0.0000"), "frequency 0 expected: {}", r.detail);
        assert!(r.simulation_based);
    }

    #[test]
    fn looping_time_evidence_mean_and_bound() {
        let a = ann(GEO, "b", "b + [a != 0]", "a in {0, 1}; b in 0..3");
        let c = cfg();
        let r = expected_looping_time_evidence(&a, &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);

        // The looping time of the doubling loop is exactly its counter.
        let bounded = ann(
            "while (x > 0) { x := x - 1; { y := 2*y } [1/2] { skip } }",
            "y",
            "[x <= 0] * y",
            "x in 0..5; y in 0..2",
        );
        let bound = parse_expectation("max(x, 0)").unwrap();
        let r = looping_bound_evidence(&bounded, &bound, &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);

        // The geometric loop has unbounded looping time; a constant claim
        // is refuted by sampling.
        let claim = parse_expectation("2").unwrap();
        let r = looping_bound_evidence(&a, &claim, &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Failed);
        assert!(r.witness.unwrap().contains("a=1"));
    }

    #[test]
    fn epsilon_comparison_pass_and_lower_bound_only_failure() {
        let mut a = ann(GEO, "1", "[a != 0]", "a in {0, 1}; b in 0..3");
        a.g = Some(parse_expectation("1").unwrap());
        let c = cfg();
        let half = Rat::new(1.into(), 2.into());
        let g = parse_expectation("1").unwrap();
        let r = epsilon_comparison(&a, &half, &g, "epsilon-termination", &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Passed, "{}", r.detail);

        // epsilon = 2 makes the comparison fail, but only against a
        // truncated (certified-lower-bound) value iteration result, so the
        // verdict must be inconclusive rather than a decisive failure.
        let two = Rat::from_integer(2.into());
        let r = epsilon_comparison(&a, &two, &g, "epsilon-termination", &c).unwrap();
        assert_eq!(r.status, ConditionStatus::Inconclusive, "{}", r.detail);
    }

    #[test]
    fn ui_probe_separates_the_two_fixed_points() {
        let c = cfg();
        // The sound invariant is the least fixed point: gap 0 everywhere.
        let sound = ann(
            CEX,
            "b",
            "b + [a != 0]",
            "a in {0, 1}; b in 0..2; k in 0..2",
        );
        let report = check_uniform_integrability_empirical(&sound, 6, &c).unwrap();
        assert!(
            report.max_final_gap < 1e-6,
            "gap {} should vanish",
            report.max_final_gap
        );

        // The greater fixed point never moves either, so its gap to the
        // least fixed point stays bounded away from zero.
        let unsound = ann(
            CEX,
            "b",
            "b + [a != 0] * (1 + 2^k)",
            "a in {0, 1}; b in 0..2; k in 0..2",
        );
        let report = check_uniform_integrability_empirical(&unsound, 6, &c).unwrap();
        assert!(
            report.max_final_gap > 0.9,
            "gap {} should stay away from zero (it is 2^k at guard-true states)",
            report.max_final_gap
        );

        // Iterating from 0 approaches the least fixed point from below: the
        // gap shrinks as the probe depth grows.
        let from_zero = ann(CEX, "b", "0", "a in {0, 1}; b in 0..2; k in 0..2");
        let shallow = check_uniform_integrability_empirical(&from_zero, 2, &c).unwrap();
        let deep = check_uniform_integrability_empirical(&from_zero, 10, &c).unwrap();
        assert!(
            deep.max_final_gap < shallow.max_final_gap,
            "deeper probes close the gap: {} vs {}",
            deep.max_final_gap,
            shallow.max_final_gap
        );
        // Ten iterates leave roughly 2^-10 of the mass (carrying b ~ n)
        // unaccounted for: about 0.023 here.
        assert!(deep.max_final_gap < 0.05, "gap {}", deep.max_final_gap);
    }
}
