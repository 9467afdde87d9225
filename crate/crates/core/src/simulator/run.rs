//! Trajectory interpreter: executes one program run under a given random
//! stream, counting runtime cost in the same units the expected-runtime
//! transformer charges.
//!
//! Cost model: one unit per `skip`, per assignment (uniform assignments
//! included), per conditional dispatch, per probabilistic-choice dispatch,
//! and per loop-guard evaluation — including the final evaluation that
//! exits the loop.
//!
//! Divergence is handled with a step cap that applies *per loop entry*:
//! each time a `while` statement is entered it may evaluate its guard at
//! most `step_cap` times before the run is abandoned as nonterminated.

use serde::Serialize;

use super::rng::SplitMix64;
use super::SimError;
use crate::algebra::eval_pred;
use crate::syntax::{State, Stmt};
use crate::transformers::{as_loop, assign_state, prob_at, unif_bounds};

/// Parameters of a simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    /// Number of independent trajectories to sample.
    pub samples: u64,
    /// Master seed; trajectory `i` uses the stream `trajectory_rng(seed, i)`.
    pub seed: u64,
    /// Maximum guard evaluations allowed each time a loop is entered.
    pub step_cap: u64,
    /// Worker threads; any value produces bit-identical estimates.
    pub threads: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            samples: 100_000,
            seed: 0xC0FFEE,
            step_cap: 10_000,
            threads: 1,
        }
    }
}

/// Outcome of interpreting a whole program once.
#[derive(Debug, Clone)]
pub struct Run {
    /// Final state if the run terminated, otherwise the state at abandonment.
    pub state: State,
    /// Accumulated runtime cost in model units.
    pub cost: u64,
    /// False when some loop hit its per-entry step cap.
    pub terminated: bool,
}

/// Executes `prog` from `init` using the given random stream.
pub fn run_program(
    prog: &Stmt,
    init: &State,
    rng: &mut SplitMix64,
    step_cap: u64,
) -> Result<Run, SimError> {
    let mut state = init.clone();
    let mut cost = 0u64;
    let terminated = exec(prog, &mut state, rng, step_cap, &mut cost)?;
    Ok(Run {
        state,
        cost,
        terminated,
    })
}

/// Runs `stmt` in place; returns false when a step cap was hit, in which
/// case the run must be abandoned (the state is mid-execution).
fn exec(
    stmt: &Stmt,
    s: &mut State,
    rng: &mut SplitMix64,
    step_cap: u64,
    cost: &mut u64,
) -> Result<bool, SimError> {
    match stmt {
        Stmt::Skip => {
            *cost += 1;
            Ok(true)
        }
        Stmt::Assign(var, e) => {
            *cost += 1;
            let value = crate::algebra::eval_signed(e, s)?;
            *s = assign_state(s, var, value)?;
            Ok(true)
        }
        Stmt::UnifAssign(var, lo, hi) => {
            *cost += 1;
            let (l, h) = unif_bounds(lo, hi, s)?;
            let drawn = rng.next_int_inclusive(l, h);
            s.set(var, num::BigRational::from_integer(drawn.into()));
            Ok(true)
        }
        Stmt::Seq(first, second) => {
            if !exec(first, s, rng, step_cap, cost)? {
                return Ok(false);
            }
            exec(second, s, rng, step_cap, cost)
        }
        Stmt::Ite(cond, then_branch, else_branch) => {
            *cost += 1;
            if eval_pred(cond, s)? {
                exec(then_branch, s, rng, step_cap, cost)
            } else {
                exec(else_branch, s, rng, step_cap, cost)
            }
        }
        Stmt::PChoice(left, prob, right) => {
            *cost += 1;
            let p = prob_at(prob, s)?.to_f64();
            if rng.next_f64() < p {
                exec(left, s, rng, step_cap, cost)
            } else {
                exec(right, s, rng, step_cap, cost)
            }
        }
        Stmt::While(guard, body) => {
            let mut guards_evaluated = 0u64;
            loop {
                if guards_evaluated >= step_cap {
                    return Ok(false);
                }
                guards_evaluated += 1;
                *cost += 1;
                if !eval_pred(guard, s)? {
                    return Ok(true);
                }
                if !exec(body, s, rng, step_cap, cost)? {
                    return Ok(false);
                }
            }
        }
    }
}

/// One simulated execution of a loop, recorded at guard-evaluation
/// granularity: `heads[k]` is the state at the loop head after `k` body
/// executions, so `heads[0]` is the initial state.
#[derive(Debug, Clone)]
pub struct LoopRun {
    /// Loop-head states in execution order; the last entry is the exit
    /// state when the run terminated.
    pub heads: Vec<State>,
    /// Index of the first head where the guard was false, when reached.
    pub looping_time: Option<u64>,
    /// Accumulated runtime cost in model units.
    pub cost: u64,
    /// True when the guard became false within the caps.
    pub terminated: bool,
}

/// Executes the loop `loop_stmt` from `init`, recording loop-head states.
///
/// With `head_budget = Some(n)` the run stops early once `n` heads are
/// recorded and the guard is still true at the last of them — enough to
/// evaluate any functional of the first `n` head states without running
/// the loop to termination. With `None`, the run continues until the
/// guard fails or `step_cap` guard evaluations have been spent.
pub fn run_loop_heads(
    loop_stmt: &Stmt,
    init: &State,
    rng: &mut SplitMix64,
    step_cap: u64,
    head_budget: Option<u64>,
) -> Result<LoopRun, SimError> {
    let (guard, body) = as_loop(loop_stmt)?;
    let mut state = init.clone();
    let mut cost = 0u64;
    let mut heads: Vec<State> = Vec::new();
    loop {
        heads.push(state.clone());
        if heads.len() as u64 > step_cap {
            // The cap counts guard evaluations; this head's guard would be
            // evaluation step_cap + 1, so the run is abandoned first.
            heads.pop();
            return Ok(LoopRun {
                heads,
                looping_time: None,
                cost,
                terminated: false,
            });
        }
        cost += 1;
        if !eval_pred(guard, &state)? {
            let t = heads.len() as u64 - 1;
            return Ok(LoopRun {
                heads,
                looping_time: Some(t),
                cost,
                terminated: true,
            });
        }
        if let Some(budget) = head_budget {
            if heads.len() as u64 >= budget {
                return Ok(LoopRun {
                    heads,
                    looping_time: None,
                    cost,
                    terminated: false,
                });
            }
        }
        if !exec(body, &mut state, rng, step_cap, &mut cost)? {
            return Ok(LoopRun {
                heads,
                looping_time: None,
                cost,
                terminated: false,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::trajectory_rng;
    use crate::syntax::parse_program;
    use num::BigRational;

    fn state(pairs: &[(&str, i64)]) -> State {
        let mut s = State::new();
        for (v, x) in pairs {
            s = s.bind(v, *x);
        }
        s
    }

    fn int(s: &State, var: &str) -> i64 {
        let r = s.get(var).expect("bound");
        assert!(r.is_integer(), "{var} not integral: {r}");
        let (n, d) = (r.numer(), r.denom());
        assert!(d == &num::BigInt::from(1));
        n.to_string().parse().unwrap()
    }

    #[test]
    fn deterministic_straight_line_cost_and_state() {
        // skip; x := x + 1; if (x > 0) { y := 2 } else { y := 3 }
        // costs: skip 1, assign 1, dispatch 1, branch assign 1.
        let prog =
            parse_program("skip; x := x + 1; if (x > 0) { y := 2 } else { y := 3 }").unwrap();
        let mut rng = SplitMix64::new(0);
        let run = run_program(&prog, &state(&[("x", 0)]), &mut rng, 100).unwrap();
        assert!(run.terminated);
        assert_eq!(run.cost, 4);
        assert_eq!(int(&run.state, "x"), 1);
        assert_eq!(int(&run.state, "y"), 2);
    }

    #[test]
    fn probabilistic_choice_with_certain_branch_is_deterministic() {
        let always_left = parse_program("{ x := 1 } [1] { x := 2 }").unwrap();
        let always_right = parse_program("{ x := 1 } [0] { x := 2 }").unwrap();
        for i in 0..50 {
            let mut rng = trajectory_rng(9, i);
            let r = run_program(&always_left, &State::new(), &mut rng, 10).unwrap();
            assert_eq!(int(&r.state, "x"), 1);
            let mut rng = trajectory_rng(9, i);
            let r = run_program(&always_right, &State::new(), &mut rng, 10).unwrap();
            assert_eq!(int(&r.state, "x"), 2);
            // dispatch + branch assignment
            assert_eq!(r.cost, 2);
        }
    }

    #[test]
    fn uniform_assignment_stays_in_bounds_and_costs_one() {
        let prog = parse_program("x := unif(1..3)").unwrap();
        for i in 0..200 {
            let mut rng = trajectory_rng(1, i);
            let r = run_program(&prog, &State::new(), &mut rng, 10).unwrap();
            let x = int(&r.state, "x");
            assert!((1..=3).contains(&x));
            assert_eq!(r.cost, 1);
        }
    }

    #[test]
    fn state_dependent_probability_is_resolved_per_iteration() {
        // From x = 0 the branch weight [x > 0] is 0, so the right branch
        // always runs and the division by zero on the left is never touched.
        let prog = parse_program("{ y := 1/x } [ [x > 0] ] { y := 0 }").unwrap();
        let mut rng = SplitMix64::new(3);
        let r = run_program(&prog, &state(&[("x", 0)]), &mut rng, 10).unwrap();
        assert_eq!(int(&r.state, "y"), 0);
    }

    #[test]
    fn loop_cost_counts_the_failing_guard() {
        // while (x > 0) { x := x - 1 } from x = 3:
        // guards true,true,true,false = 4, bodies = 3, total 7.
        let prog = parse_program("while (x > 0) { x := x - 1 }").unwrap();
        let mut rng = SplitMix64::new(0);
        let r = run_program(&prog, &state(&[("x", 3)]), &mut rng, 100).unwrap();
        assert!(r.terminated);
        assert_eq!(r.cost, 7);
        assert_eq!(int(&r.state, "x"), 0);
    }

    #[test]
    fn divergent_loop_hits_the_step_cap() {
        let prog = parse_program("while (true) { skip }").unwrap();
        let mut rng = SplitMix64::new(0);
        let r = run_program(&prog, &State::new(), &mut rng, 1000).unwrap();
        assert!(!r.terminated);
        // 1000 guard evaluations, each followed by a skip, before the
        // 1001st guard evaluation aborts the run.
        assert_eq!(r.cost, 2000);
    }

    #[test]
    fn step_cap_applies_per_loop_entry() {
        // The inner loop diverges on its first entry, so the outer loop
        // never completes an iteration.
        let prog = parse_program("while (a = 1) { while (true) { skip }; a := 0 }").unwrap();
        let mut rng = SplitMix64::new(0);
        let r = run_program(&prog, &state(&[("a", 1)]), &mut rng, 50).unwrap();
        assert!(!r.terminated);
        assert_eq!(int(&r.state, "a"), 1);
    }

    #[test]
    fn loop_heads_record_every_guard_state() {
        let prog = parse_program("while (x > 0) { x := x - 1 }").unwrap();
        let mut rng = SplitMix64::new(0);
        let lr = run_loop_heads(&prog, &state(&[("x", 2)]), &mut rng, 100, None).unwrap();
        assert!(lr.terminated);
        assert_eq!(lr.looping_time, Some(2));
        let xs: Vec<i64> = lr.heads.iter().map(|s| int(s, "x")).collect();
        assert_eq!(xs, vec![2, 1, 0]);
        // 3 guard evaluations + 2 assignments.
        assert_eq!(lr.cost, 5);
    }

    #[test]
    fn loop_heads_terminating_immediately_have_time_zero() {
        let prog = parse_program("while (x > 0) { x := x - 1 }").unwrap();
        let mut rng = SplitMix64::new(0);
        let lr = run_loop_heads(&prog, &state(&[("x", 0)]), &mut rng, 100, None).unwrap();
        assert_eq!(lr.looping_time, Some(0));
        assert_eq!(lr.heads.len(), 1);
    }

    #[test]
    fn head_budget_stops_early_without_claiming_termination() {
        let prog = parse_program("while (true) { x := x + 1 }").unwrap();
        let mut rng = SplitMix64::new(0);
        let lr = run_loop_heads(&prog, &state(&[("x", 0)]), &mut rng, 10_000, Some(4)).unwrap();
        assert!(!lr.terminated);
        assert_eq!(lr.looping_time, None);
        let xs: Vec<i64> = lr.heads.iter().map(|s| int(s, "x")).collect();
        assert_eq!(xs, vec![0, 1, 2, 3]);
    }

    #[test]
    fn head_budget_still_detects_termination_at_the_last_head() {
        // From x = 2 the loop exits at head index 2, within a budget of 3.
        let prog = parse_program("while (x > 0) { x := x - 1 }").unwrap();
        let mut rng = SplitMix64::new(0);
        let lr = run_loop_heads(&prog, &state(&[("x", 2)]), &mut rng, 100, Some(3)).unwrap();
        assert!(lr.terminated);
        assert_eq!(lr.looping_time, Some(2));
    }

    #[test]
    fn loop_heads_reject_non_loops() {
        let prog = parse_program("x := 1").unwrap();
        let mut rng = SplitMix64::new(0);
        let err = run_loop_heads(&prog, &State::new(), &mut rng, 10, None).unwrap_err();
        assert!(matches!(
            err,
            SimError::Transform(crate::transformers::TransformError::NotALoop)
        ));
    }

    #[test]
    fn fractional_assignments_are_kept_exactly() {
        let prog = parse_program("x := x + 1/2").unwrap();
        let mut rng = SplitMix64::new(0);
        let r = run_program(&prog, &state(&[("x", 0)]), &mut rng, 10).unwrap();
        assert_eq!(
            r.state.get("x").unwrap(),
            &BigRational::new(1.into(), 2.into())
        );
    }
}
