//! Numeric least-fixed-point evaluation of `wp` / `ert` on full programs.
//!
//! Loop values are computed by Kleene value iteration from 0 over the set of
//! loop-head states reachable from the query state: probabilistic branches
//! enumerate both successors, uniform draws enumerate every value, nested
//! loops are solved innermost-first on demand. Iterating from the bottom
//! means every intermediate sweep is a sound lower approximation of the true
//! value, so a run that stops early (iteration budget, truncation) still
//! yields a certified lower bound, reported via `is_lower_bound_only`.
//!
//! Chains that drift unboundedly (a counter that grows with positive
//! probability forever) have infinite reachable sets. Unless the caller
//! supplies explicit truncation bounds, discovery is confined to a window
//! around the query state's values (`auto_window`, default ±64); states
//! outside the window are absorbing with value 0, again a lower bound. Set
//! `auto_window: None` to disable windowing, in which case discovery beyond
//! `state_cap` states is an error.

use super::characteristic::as_loop;
use super::loopfree::TransformerKind;
use super::TransformError;
use crate::algebra::{eval, eval_pred, eval_signed, ExtReal};
use crate::syntax::{Expr, Rat, State, Stmt, Var};
use num::{BigInt, ToPrimitive};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// An ERT sweep value above this threshold is reported as infinity.
pub const DIVERGE_THRESHOLD: f64 = 1e15;

/// Per-variable absorbing bounds; variables not listed are unrestricted.
#[derive(Debug, Clone, Default)]
pub struct Truncation {
    pub bounds: BTreeMap<Var, (Rat, Rat)>,
}

impl Truncation {
    pub fn contains(&self, s: &State) -> bool {
        for (var, (lo, hi)) in &self.bounds {
            if let Some(v) = s.get(var) {
                if v < lo || v > hi {
                    return false;
                }
            }
        }
        true
    }

    /// Bounds covering `states`, widened by `margin` on both sides.
    pub fn window_around(states: &[State], margin: i64) -> Truncation {
        let m = Rat::from_integer(margin.into());
        let mut bounds: BTreeMap<Var, (Rat, Rat)> = BTreeMap::new();
        for s in states {
            for (var, v) in &s.0 {
                bounds
                    .entry(var.clone())
                    .and_modify(|(lo, hi)| {
                        if v < lo {
                            *lo = v.clone();
                        }
                        if v > hi {
                            *hi = v.clone();
                        }
                    })
                    .or_insert_with(|| (v.clone(), v.clone()));
            }
        }
        Truncation {
            bounds: bounds
                .into_iter()
                .map(|(var, (lo, hi))| (var, (lo - &m, hi + &m)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FixpointConfig {
    /// Stop when successive sweeps differ by at most this much everywhere.
    pub abs_tol: f64,
    /// Sweep budget per fixed point.
    pub max_iters: u64,
    /// Explicit absorbing bounds (value 0 outside). Overrides `auto_window`.
    pub truncation: Option<Truncation>,
    /// Half-width of the automatic discovery window around the query states.
    pub auto_window: Option<i64>,
    /// Abort discovery beyond this many tracked states.
    pub state_cap: usize,
}

impl Default for FixpointConfig {
    fn default() -> Self {
        FixpointConfig {
            abs_tol: 1e-9,
            max_iters: 1_000_000,
            truncation: None,
            auto_window: Some(64),
            state_cap: 200_000,
        }
    }
}

/// What happened while evaluating (accumulated across nested fixed points).
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalFlags {
    /// Some reachable state fell outside the truncation bounds (its value
    /// was taken as 0, so the result is a lower bound).
    pub truncated: bool,
    /// Some fixed point exhausted its sweep budget.
    pub unconverged: bool,
    /// Some ERT value crossed [`DIVERGE_THRESHOLD`] and was promoted to
    /// infinity.
    pub diverged: bool,
    /// Total sweeps across all fixed points solved.
    pub iterations: u64,
}

impl EvalFlags {
    fn merge(&mut self, other: EvalFlags) {
        self.truncated |= other.truncated;
        self.unconverged |= other.unconverged;
        self.diverged |= other.diverged;
        self.iterations += other.iterations;
    }
}

/// Result of a numeric transformer evaluation.
#[derive(Debug, Clone)]
pub struct BoundedValue {
    pub value: ExtReal,
    /// Every fixed point met the tolerance within budget.
    pub converged: bool,
    /// Total sweeps spent.
    pub iterations: u64,
    /// The value is only guaranteed to be a lower bound on the true
    /// transformer value (truncation was applied or a budget ran out).
    pub is_lower_bound_only: bool,
}

pub type Cont<'a> = dyn Fn(&State) -> Result<ExtReal, TransformError> + 'a;

struct Ctx<'a> {
    cfg: &'a FixpointConfig,
    flags: RefCell<EvalFlags>,
}

pub(crate) fn assign_state(s: &State, var: &str, value: ExtReal) -> Result<State, TransformError> {
    let r = match value {
        ExtReal::Rat(r) => r,
        ExtReal::Float(x) => Rat::from_float(x).ok_or_else(|| {
            TransformError::NonFiniteAssignment {
                var: var.to_string(),
                value: x.to_string(),
            }
        })?,
        ExtReal::Infinity => {
            return Err(TransformError::NonFiniteAssignment {
                var: var.to_string(),
                value: "inf".to_string(),
            })
        }
    };
    Ok(s.with(var, r))
}

pub(crate) fn unif_bounds(lo: &Expr, hi: &Expr, s: &State) -> Result<(i64, i64), TransformError> {
    let to_int = |e: &Expr| -> Result<i64, TransformError> {
        let v = eval_signed(e, s)?;
        v.as_integer()
            .and_then(|n: BigInt| n.to_i64())
            .ok_or_else(|| TransformError::InvalidUniformRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            })
    };
    let l = to_int(lo)?;
    let h = to_int(hi)?;
    if l > h {
        return Err(TransformError::InvalidUniformRange {
            lo: l.to_string(),
            hi: h.to_string(),
        });
    }
    Ok((l, h))
}

/// Branch probability at a state, validated to lie in [0, 1].
pub fn prob_at(p: &Expr, s: &State) -> Result<ExtReal, TransformError> {
    let v = eval_signed(p, s)?;
    let ok = !v.is_negative() && v.leq_with_tol(&ExtReal::one(), 0.0);
    if !ok {
        return Err(TransformError::ProbabilityOutOfRange {
            value: v.to_string(),
        });
    }
    Ok(v)
}

fn cost_plus(kind: TransformerKind, v: ExtReal) -> Result<ExtReal, TransformError> {
    match kind {
        TransformerKind::Wp => Ok(v),
        TransformerKind::Ert => Ok(ExtReal::one().add(&v)?),
    }
}

fn tvalue(
    kind: TransformerKind,
    stmt: &Stmt,
    s: &State,
    cont: &Cont<'_>,
    ctx: &Ctx<'_>,
) -> Result<ExtReal, TransformError> {
    match stmt {
        Stmt::Skip => cost_plus(kind, cont(s)?),
        Stmt::Assign(v, e) => {
            let s2 = assign_state(s, v, eval_signed(e, s)?)?;
            cost_plus(kind, cont(&s2)?)
        }
        Stmt::UnifAssign(v, lo, hi) => {
            let (l, h) = unif_bounds(lo, hi, s)?;
            let mut acc = ExtReal::zero();
            for m in l..=h {
                let s2 = s.with(v, Rat::from_integer(m.into()));
                acc = acc.add(&cont(&s2)?)?;
            }
            let avg = acc.div(&ExtReal::from_int(h - l + 1))?;
            cost_plus(kind, avg)
        }
        Stmt::Seq(a, b) => {
            let inner = |s2: &State| tvalue(kind, b, s2, cont, ctx);
            tvalue(kind, a, s, &inner, ctx)
        }
        Stmt::Ite(p, t, e) => {
            let branch = if eval_pred(p, s)? { t } else { e };
            cost_plus(kind, tvalue(kind, branch, s, cont, ctx)?)
        }
        Stmt::PChoice(l, p, r) => {
            let pv = prob_at(p, s)?;
            let qv = ExtReal::one().sub(&pv)?;
            // Skip zero-probability branches entirely: they may diverge or
            // be undefined, and they contribute nothing.
            let mut acc = ExtReal::zero();
            if !pv.is_zero() {
                acc = acc.add(&pv.mul(&tvalue(kind, l, s, cont, ctx)?)?)?;
            }
            if !qv.is_zero() {
                acc = acc.add(&qv.mul(&tvalue(kind, r, s, cont, ctx)?)?)?;
            }
            cost_plus(kind, acc)
        }
        Stmt::While(..) => {
            let (values, _) = loop_solve(kind, stmt, std::slice::from_ref(s), cont, ctx)?;
            Ok(values.into_iter().next().expect("one query state"))
        }
    }
}

/// All states the body can exit into from `s` with positive probability.
/// Inner loops contribute their reachable exit states; inner loop-head
/// states outside the truncation bounds are absorbing and yield no exits.
fn body_exit_support(
    body: &Stmt,
    s: &State,
    trunc: &Truncation,
    ctx: &Ctx<'_>,
    out: &mut BTreeSet<State>,
) -> Result<(), TransformError> {
    match body {
        Stmt::Skip => {
            out.insert(s.clone());
        }
        Stmt::Assign(v, e) => {
            out.insert(assign_state(s, v, eval_signed(e, s)?)?);
        }
        Stmt::UnifAssign(v, lo, hi) => {
            let (l, h) = unif_bounds(lo, hi, s)?;
            for m in l..=h {
                out.insert(s.with(v, Rat::from_integer(m.into())));
            }
        }
        Stmt::Seq(a, b) => {
            let mut mid = BTreeSet::new();
            body_exit_support(a, s, trunc, ctx, &mut mid)?;
            for m in &mid {
                body_exit_support(b, m, trunc, ctx, out)?;
            }
        }
        Stmt::Ite(p, t, e) => {
            let branch = if eval_pred(p, s)? { t } else { e };
            body_exit_support(branch, s, trunc, ctx, out)?;
        }
        Stmt::PChoice(l, p, r) => {
            let pv = prob_at(p, s)?;
            if !pv.is_zero() {
                body_exit_support(l, s, trunc, ctx, out)?;
            }
            if !ExtReal::one().sub(&pv)?.is_zero() {
                body_exit_support(r, s, trunc, ctx, out)?;
            }
        }
        Stmt::While(g2, b2) => {
            // Exit states of the inner loop reachable from s.
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::new();
            seen.insert(s.clone());
            queue.push_back(s.clone());
            while let Some(h) = queue.pop_front() {
                if !trunc.contains(&h) {
                    ctx.flags.borrow_mut().truncated = true;
                    continue;
                }
                if !eval_pred(g2, &h)? {
                    out.insert(h);
                    continue;
                }
                let mut next = BTreeSet::new();
                body_exit_support(b2, &h, trunc, ctx, &mut next)?;
                for n in next {
                    if seen.insert(n.clone()) {
                        if seen.len() > ctx.cfg.state_cap {
                            return Err(TransformError::StateSpaceExplosion {
                                count: seen.len(),
                            });
                        }
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    if out.len() > ctx.cfg.state_cap {
        return Err(TransformError::StateSpaceExplosion { count: out.len() });
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Terminal,
    Truncated,
    Iterating,
}

/// Solve the loop's fixed point for every state in `queries` at once.
/// Returns one value per query state.
fn loop_solve(
    kind: TransformerKind,
    loop_stmt: &Stmt,
    queries: &[State],
    cont: &Cont<'_>,
    ctx: &Ctx<'_>,
) -> Result<(Vec<ExtReal>, EvalFlags), TransformError> {
    let (guard, body) = as_loop(loop_stmt)?;
    let trunc = match (&ctx.cfg.truncation, ctx.cfg.auto_window) {
        (Some(t), _) => t.clone(),
        (None, Some(w)) => Truncation::window_around(queries, w),
        (None, None) => Truncation::default(),
    };

    // Discover the reachable loop-head states.
    let mut index: BTreeMap<State, usize> = BTreeMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut role: Vec<Role> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let insert = |s: &State,
                      index: &mut BTreeMap<State, usize>,
                      states: &mut Vec<State>,
                      role: &mut Vec<Role>|
     -> Result<(usize, bool), TransformError> {
        if let Some(&i) = index.get(s) {
            return Ok((i, false));
        }
        let i = states.len();
        if i + 1 > ctx.cfg.state_cap {
            return Err(TransformError::StateSpaceExplosion { count: i + 1 });
        }
        index.insert(s.clone(), i);
        states.push(s.clone());
        let r = if !trunc.contains(s) {
            Role::Truncated
        } else if !eval_pred(guard, s)? {
            Role::Terminal
        } else {
            Role::Iterating
        };
        role.push(r);
        Ok((i, true))
    };

    for q in queries {
        let (i, new) = insert(q, &mut index, &mut states, &mut role)?;
        if new {
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        if role[i] != Role::Iterating {
            continue;
        }
        let here = states[i].clone();
        let mut succ = BTreeSet::new();
        body_exit_support(body, &here, &trunc, ctx, &mut succ)?;
        for n in succ {
            let (j, new) = insert(&n, &mut index, &mut states, &mut role)?;
            if new {
                queue.push_back(j);
            }
        }
    }

    let mut local = EvalFlags::default();
    local.truncated = role.iter().any(|r| *r == Role::Truncated);

    // Exact fast path: a query that starts outside the guard never iterates.
    let all_terminal = queries
        .iter()
        .all(|q| role[index[q]] == Role::Terminal);
    let terminal_value = |r: &State| -> Result<ExtReal, TransformError> {
        match kind {
            TransformerKind::Wp => cont(r),
            TransformerKind::Ert => ExtReal::one().add(&cont(r)?).map_err(Into::into),
        }
    };
    if all_terminal {
        let mut out = Vec::with_capacity(queries.len());
        for q in queries {
            out.push(terminal_value(q)?);
        }
        ctx.flags.borrow_mut().merge(local);
        return Ok((out, local));
    }

    // Fixed per-state values for terminal/truncated states, 0 for the rest.
    let n = states.len();
    let value = RefCell::new(vec![0.0f64; n]);
    let mut iterating: Vec<usize> = Vec::new();
    for i in 0..n {
        match role[i] {
            Role::Truncated => {}
            Role::Terminal => value.borrow_mut()[i] = terminal_value(&states[i])?.to_f64(),
            Role::Iterating => iterating.push(i),
        }
    }

    let lookup = |s: &State| -> Result<ExtReal, TransformError> {
        match index.get(s) {
            Some(&j) => {
                let x = value.borrow()[j];
                if x.is_infinite() {
                    Ok(ExtReal::Infinity)
                } else {
                    Ok(ExtReal::Float(x))
                }
            }
            // Only truncation can make a successor miss the index.
            None => Ok(ExtReal::zero()),
        }
    };

    let mut sweeps: u64 = 0;
    let mut converged = false;
    let query_idx: Vec<usize> = queries.iter().map(|q| index[q]).collect();
    'sweeps: while sweeps < ctx.cfg.max_iters {
        sweeps += 1;
        let mut maxdiff = 0.0f64;
        for &i in &iterating {
            let body_val = tvalue(kind, body, &states[i], &lookup, ctx)?;
            let newv = cost_plus(kind, body_val)?.to_f64();
            let old = value.borrow()[i];
            // Kleene iterates from below are nondecreasing; tolerate only
            // float jitter.
            if newv < old - 1e-9 * old.abs().max(1.0) {
                return Err(TransformError::NonMonotoneIteration {
                    state: states[i].to_string(),
                    old,
                    new: newv,
                });
            }
            let newv = newv.max(old);
            if newv != old {
                maxdiff = maxdiff.max(newv - old);
            }
            value.borrow_mut()[i] = newv;
        }
        if kind == TransformerKind::Ert {
            let v = value.borrow();
            if query_idx.iter().any(|&q| v[q] > DIVERGE_THRESHOLD) {
                local.diverged = true;
                break 'sweeps;
            }
        }
        if maxdiff <= ctx.cfg.abs_tol {
            converged = true;
            break;
        }
    }
    local.iterations += sweeps;
    if !converged && !local.diverged {
        local.unconverged = true;
    }

    let out: Vec<ExtReal> = {
        let v = value.borrow();
        query_idx
            .iter()
            .map(|&q| {
                if local.diverged || v[q].is_infinite() {
                    ExtReal::Infinity
                } else {
                    ExtReal::Float(v[q])
                }
            })
            .collect()
    };
    ctx.flags.borrow_mut().merge(local);
    Ok((out, local))
}

fn bundle(value: ExtReal, fl: EvalFlags) -> BoundedValue {
    BoundedValue {
        value,
        converged: !fl.unconverged && !fl.diverged,
        iterations: fl.iterations,
        is_lower_bound_only: (fl.truncated || fl.unconverged) && !fl.diverged,
    }
}

/// Numeric transformer value of a whole program at one state.
///
/// Loop-free programs are evaluated exactly (rational in, rational out);
/// each loop goes through Kleene value iteration as described in the module
/// docs.
pub fn eval_transformer(
    kind: TransformerKind,
    prog: &Stmt,
    f: &Expr,
    s: &State,
    cfg: &FixpointConfig,
) -> Result<BoundedValue, TransformError> {
    let ctx = Ctx { cfg, flags: RefCell::new(EvalFlags::default()) };
    let cont = |s2: &State| eval(f, s2).map_err(TransformError::from);
    let v = tvalue(kind, prog, s, &cont, &ctx)?;
    let fl = ctx.flags.into_inner();
    Ok(bundle(v, fl))
}

/// Like [`eval_transformer`], but `prog` must be a loop and all query states
/// are solved in a single shared fixed point — much cheaper than one call
/// per state when cross-checking a whole domain.
pub fn eval_transformer_many(
    kind: TransformerKind,
    loop_stmt: &Stmt,
    f: &Expr,
    states: &[State],
    cfg: &FixpointConfig,
) -> Result<Vec<BoundedValue>, TransformError> {
    let ctx = Ctx { cfg, flags: RefCell::new(EvalFlags::default()) };
    let cont = |s2: &State| eval(f, s2).map_err(TransformError::from);
    let (values, fl) = loop_solve(kind, loop_stmt, states, &cont, &ctx)?;
    Ok(values.into_iter().map(|v| bundle(v, fl)).collect())
}

/// Evaluate `transformer(stmt)` applied to an arbitrary continuation at one
/// state. This is the building block the certificate checkers use to apply
/// characteristic functions with nested-loop bodies.
pub fn transformer_value(
    kind: TransformerKind,
    stmt: &Stmt,
    s: &State,
    cont: &Cont<'_>,
    cfg: &FixpointConfig,
) -> Result<(ExtReal, EvalFlags), TransformError> {
    let ctx = Ctx { cfg, flags: RefCell::new(EvalFlags::default()) };
    let v = tvalue(kind, stmt, s, cont, &ctx)?;
    let fl = ctx.flags.into_inner();
    Ok((v, fl))
}

/// One application of the loop's characteristic function to the expectation
/// given by `x_cont`, at state `s`, numerically (nested loops allowed).
pub fn char_value_at(
    kind: TransformerKind,
    loop_stmt: &Stmt,
    f: &Expr,
    x_cont: &Cont<'_>,
    s: &State,
    cfg: &FixpointConfig,
) -> Result<(ExtReal, EvalFlags), TransformError> {
    let (guard, body) = as_loop(loop_stmt)?;
    if eval_pred(guard, s).map_err(TransformError::from)? {
        let ctx = Ctx { cfg, flags: RefCell::new(EvalFlags::default()) };
        let v = tvalue(kind, body, s, x_cont, &ctx)?;
        let fl = ctx.flags.into_inner();
        Ok((cost_plus(kind, v)?, fl))
    } else {
        let v = eval(f, s)?;
        let v = cost_plus(kind, v)?;
        Ok((v, EvalFlags::default()))
    }
}

/// The first `n + 1` Kleene iterates `start, Φ(start), …, Φⁿ(start)` of the
/// loop's characteristic function, observed at the query states. Returned as
/// `table[query][iterate]`. Unlike the symbolic [`super::iterate_char`] this
/// handles nested loops and large `n`.
pub fn kleene_iterates(
    kind: TransformerKind,
    loop_stmt: &Stmt,
    f: &Expr,
    start: &Expr,
    queries: &[State],
    n: usize,
    cfg: &FixpointConfig,
) -> Result<(Vec<Vec<ExtReal>>, EvalFlags), TransformError> {
    let (guard, body) = as_loop(loop_stmt)?;
    let ctx = Ctx { cfg, flags: RefCell::new(EvalFlags::default()) };
    let cont = |s2: &State| eval(f, s2).map_err(TransformError::from);
    let trunc = match (&cfg.truncation, cfg.auto_window) {
        (Some(t), _) => t.clone(),
        (None, Some(w)) => Truncation::window_around(queries, w),
        (None, None) => Truncation::default(),
    };

    // Discovery, as in loop_solve.
    let mut index: BTreeMap<State, usize> = BTreeMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut role: Vec<Role> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for q in queries.iter() {
        if !index.contains_key(q) {
            let i = states.len();
            index.insert(q.clone(), i);
            states.push(q.clone());
            role.push(Role::Iterating); // refined below
            queue.push_back(i);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let i = queue[head];
        head += 1;
        let s = states[i].clone();
        let r = if !trunc.contains(&s) {
            Role::Truncated
        } else if !eval_pred(guard, &s)? {
            Role::Terminal
        } else {
            Role::Iterating
        };
        role[i] = r;
        if r != Role::Iterating {
            continue;
        }
        let mut succ = BTreeSet::new();
        body_exit_support(body, &s, &trunc, &ctx, &mut succ)?;
        for nxt in succ {
            if !index.contains_key(&nxt) {
                let j = states.len();
                if j + 1 > cfg.state_cap {
                    return Err(TransformError::StateSpaceExplosion { count: j + 1 });
                }
                index.insert(nxt.clone(), j);
                states.push(nxt);
                role.push(Role::Iterating);
                queue.push_back(j);
            }
        }
    }

    let m = states.len();
    let mut cur = vec![0.0f64; m];
    for i in 0..m {
        cur[i] = match role[i] {
            Role::Truncated => 0.0,
            _ => eval(start, &states[i])?.to_f64(),
        };
    }
    let query_idx: Vec<usize> = queries.iter().map(|q| index[q]).collect();
    let mut table: Vec<Vec<ExtReal>> = query_idx
        .iter()
        .map(|&q| vec![float_or_inf(cur[q])])
        .collect();

    // Pure (Jacobi) sweeps so entry k really is Φᵏ(start).
    let mut terminal_cache: BTreeMap<usize, f64> = BTreeMap::new();
    for _ in 0..n {
        let prev = cur.clone();
        let lookup = |s: &State| -> Result<ExtReal, TransformError> {
            match index.get(s) {
                Some(&j) => Ok(float_or_inf(prev[j])),
                None => Ok(ExtReal::zero()),
            }
        };
        for i in 0..m {
            cur[i] = match role[i] {
                Role::Truncated => 0.0,
                Role::Terminal => {
                    if let Some(&v) = terminal_cache.get(&i) {
                        v
                    } else {
                        let tv = match kind {
                            TransformerKind::Wp => cont(&states[i])?,
                            TransformerKind::Ert => {
                                ExtReal::one().add(&cont(&states[i])?)?
                            }
                        }
                        .to_f64();
                        terminal_cache.insert(i, tv);
                        tv
                    }
                }
                Role::Iterating => {
                    let body_val = tvalue(kind, body, &states[i], &lookup, &ctx)?;
                    cost_plus(kind, body_val)?.to_f64()
                }
            };
        }
        for (qi, &q) in query_idx.iter().enumerate() {
            table[qi].push(float_or_inf(cur[q]));
        }
    }
    let fl = ctx.flags.into_inner();
    Ok((table, fl))
}

fn float_or_inf(x: f64) -> ExtReal {
    if x.is_infinite() {
        ExtReal::Infinity
    } else {
        ExtReal::Float(x)
    }
}
