//! Monte-Carlo estimators over independent trajectories.
//!
//! All estimators stream their samples through Welford accumulators and run
//! trajectories in fixed chunks of 4096, merging chunk statistics in chunk
//! order. Worker threads only decide *who* computes a chunk, never the
//! merge order, so every estimate is bit-identical for every thread count.
//!
//! Nontermination policy: a run abandoned at the step cap contributes 0 to
//! post-expectation estimates and its partial cost to runtime estimates, so
//! both estimators are biased low — consistent with the toolkit's use of
//! simulation as an independent *lower* witness for certified bounds. The
//! nonterminated fraction is always reported alongside the mean.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use super::rng::{trajectory_rng, SplitMix64};
use super::run::{run_loop_heads, run_program, SimConfig};
use super::SimError;
use crate::algebra::{eval, ExtReal};
use crate::syntax::{Expr, State, Stmt};

/// Trajectories per work unit; fixed so that results do not depend on the
/// number of worker threads.
const CHUNK: u64 = 4096;

/// Streaming mean and variance (Welford's algorithm) with an exact
/// two-accumulator merge, so chunked computation is associative.
#[derive(Debug, Clone, Copy, Default)]
pub struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    /// Adds one observation.
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Combines two accumulators as if their observations were concatenated.
    pub fn merge(&mut self, other: Welford) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.mean += delta * other.n as f64 / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    /// Sample mean; 0 when no observations were recorded.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Standard error of the mean with Bessel's correction; 0 when fewer
    /// than two observations were recorded.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let var = (self.m2 / (self.n - 1) as f64).max(0.0);
        (var / self.n as f64).sqrt()
    }
}

/// A Monte-Carlo estimate with everything needed to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub mean: f64,
    /// Standard error of the mean (0 when fewer than two samples).
    pub stderr: f64,
    /// Observations behind `mean` (for conditional estimators this can be
    /// smaller than the configured sample count).
    pub n_samples: u64,
    /// Fraction of all trajectories abandoned at a step cap.
    pub nonterminated_fraction: f64,
    /// Master seed the run used.
    pub seed: u64,
}

/// Looping-time statistics of a loop.
#[derive(Debug, Clone, Serialize)]
pub struct LoopingTimeEstimate {
    /// Mean looping time over the trajectories that terminated.
    pub time: Estimate,
    /// Fraction of trajectories whose guard became false within the cap.
    pub termination_frequency: f64,
    /// Largest looping time observed among terminating trajectories.
    pub max_observed: u64,
}

/// Per-chunk accumulator that can absorb another chunk's statistics.
trait Chunkable: Default + Send {
    fn merge(&mut self, other: Self);
}

#[derive(Default)]
struct MeanAcc {
    w: Welford,
    nonterminated: u64,
}

impl Chunkable for MeanAcc {
    fn merge(&mut self, other: Self) {
        self.w.merge(other.w);
        self.nonterminated += other.nonterminated;
    }
}

#[derive(Default)]
struct TimeAcc {
    w: Welford,
    terminated: u64,
    max_observed: u64,
}

impl Chunkable for TimeAcc {
    fn merge(&mut self, other: Self) {
        self.w.merge(other.w);
        self.terminated += other.terminated;
        self.max_observed = self.max_observed.max(other.max_observed);
    }
}

/// Runs `per_trajectory` once per configured sample, in fixed chunks whose
/// statistics are merged in chunk order regardless of thread count.
fn fold_trajectories<A, F>(cfg: &SimConfig, per_trajectory: F) -> Result<A, SimError>
where
    A: Chunkable,
    F: Fn(&mut A, &mut SplitMix64) -> Result<(), SimError> + Sync,
{
    let samples = cfg.samples;
    let n_chunks = samples.div_ceil(CHUNK);
    let run_chunk = |c: u64| -> Result<A, SimError> {
        let lo = c * CHUNK;
        let hi = ((c + 1) * CHUNK).min(samples);
        let mut acc = A::default();
        for i in lo..hi {
            let mut rng = trajectory_rng(cfg.seed, i);
            per_trajectory(&mut acc, &mut rng)?;
        }
        Ok(acc)
    };

    let workers = cfg.threads.max(1).min(n_chunks.max(1) as usize);
    if workers <= 1 {
        let mut out = A::default();
        for c in 0..n_chunks {
            out.merge(run_chunk(c)?);
        }
        return Ok(out);
    }

    let next_chunk = AtomicU64::new(0);
    let mut results: Vec<(u64, Result<A, SimError>)> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for _ in 0..workers {
            handles.push(scope.spawn(|| {
                let mut done = Vec::new();
                loop {
                    let c = next_chunk.fetch_add(1, Ordering::Relaxed);
                    if c >= n_chunks {
                        break;
                    }
                    let res = run_chunk(c);
                    let failed = res.is_err();
                    done.push((c, res));
                    if failed {
                        break;
                    }
                }
                done
            }));
        }
        let mut all = Vec::new();
        for h in handles {
            all.extend(h.join().expect("simulation worker panicked"));
        }
        all
    });
    results.sort_by_key(|(c, _)| *c);
    let mut out = A::default();
    for (_, res) in results {
        out.merge(res?);
    }
    Ok(out)
}

/// Evaluates an expectation at a state and insists on a finite sample.
fn finite_sample(f: &Expr, s: &State) -> Result<f64, SimError> {
    match eval(f, s)? {
        ExtReal::Infinity => Err(SimError::InfiniteSample {
            state: s.to_string(),
        }),
        v => Ok(v.to_f64()),
    }
}

fn fraction(part: u64, whole: u64) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}

/// Estimates the expected value of `post` over final states of `prog`.
///
/// Abandoned runs contribute 0, so the estimate is a lower witness for the
/// weakest pre-expectation of `post`.
pub fn estimate_post(
    prog: &Stmt,
    post: &Expr,
    init: &State,
    cfg: &SimConfig,
) -> Result<Estimate, SimError> {
    let acc: MeanAcc = fold_trajectories(cfg, |acc: &mut MeanAcc, rng| {
        let run = run_program(prog, init, rng, cfg.step_cap)?;
        if run.terminated {
            acc.w.push(finite_sample(post, &run.state)?);
        } else {
            acc.nonterminated += 1;
            acc.w.push(0.0);
        }
        Ok(())
    })?;
    Ok(Estimate {
        mean: acc.w.mean(),
        stderr: acc.w.stderr(),
        n_samples: acc.w.count(),
        nonterminated_fraction: fraction(acc.nonterminated, cfg.samples),
        seed: cfg.seed,
    })
}

/// Estimates the expected runtime of `prog` plus the continuation cost
/// `tick_post` charged at the final state.
///
/// Abandoned runs contribute only the cost spent before abandonment, so the
/// estimate is a lower witness for the expected runtime.
pub fn estimate_ert(
    prog: &Stmt,
    tick_post: &Expr,
    init: &State,
    cfg: &SimConfig,
) -> Result<Estimate, SimError> {
    let acc: MeanAcc = fold_trajectories(cfg, |acc: &mut MeanAcc, rng| {
        let run = run_program(prog, init, rng, cfg.step_cap)?;
        let mut value = run.cost as f64;
        if run.terminated {
            value += finite_sample(tick_post, &run.state)?;
        } else {
            acc.nonterminated += 1;
        }
        acc.w.push(value);
        Ok(())
    })?;
    Ok(Estimate {
        mean: acc.w.mean(),
        stderr: acc.w.stderr(),
        n_samples: acc.w.count(),
        nonterminated_fraction: fraction(acc.nonterminated, cfg.samples),
        seed: cfg.seed,
    })
}

/// Estimates the probability that `prog` terminates within the step cap —
/// a lower witness for the true termination probability.
pub fn estimate_termination_probability(
    prog: &Stmt,
    init: &State,
    cfg: &SimConfig,
) -> Result<Estimate, SimError> {
    let acc: MeanAcc = fold_trajectories(cfg, |acc: &mut MeanAcc, rng| {
        let run = run_program(prog, init, rng, cfg.step_cap)?;
        if run.terminated {
            acc.w.push(1.0);
        } else {
            acc.nonterminated += 1;
            acc.w.push(0.0);
        }
        Ok(())
    })?;
    Ok(Estimate {
        mean: acc.w.mean(),
        stderr: acc.w.stderr(),
        n_samples: acc.w.count(),
        nonterminated_fraction: fraction(acc.nonterminated, cfg.samples),
        seed: cfg.seed,
    })
}

/// Estimates the looping time of a loop: the number of body executions
/// until the guard first fails, averaged over terminating trajectories.
pub fn estimate_looping_time(
    loop_stmt: &Stmt,
    init: &State,
    cfg: &SimConfig,
) -> Result<LoopingTimeEstimate, SimError> {
    let acc: TimeAcc = fold_trajectories(cfg, |acc: &mut TimeAcc, rng| {
        let lr = run_loop_heads(loop_stmt, init, rng, cfg.step_cap, None)?;
        if let Some(t) = lr.looping_time {
            acc.w.push(t as f64);
            acc.terminated += 1;
            acc.max_observed = acc.max_observed.max(t);
        }
        Ok(())
    })?;
    let termination_frequency = fraction(acc.terminated, cfg.samples);
    Ok(LoopingTimeEstimate {
        time: Estimate {
            mean: acc.w.mean(),
            stderr: acc.w.stderr(),
            n_samples: acc.w.count(),
            nonterminated_fraction: 1.0 - termination_frequency,
            seed: cfg.seed,
        },
        termination_frequency,
        max_observed: acc.max_observed,
    })
}

/// Estimates the expected value of the stopped-and-filled process at index
/// `n`: a trajectory contributes `post` at its exit state when the loop
/// leaves within `n` body executions, and `invariant` at the state after
/// `n + 1` body executions otherwise.
///
/// Each trajectory is run for at most `n + 1` body executions, so the
/// estimate is exact-in-distribution even for loops that rarely terminate;
/// only a diverging loop *body* can abandon a trajectory (contributing 0).
pub fn estimate_induced_process(
    loop_stmt: &Stmt,
    post: &Expr,
    invariant: &Expr,
    n: u64,
    init: &State,
    cfg: &SimConfig,
) -> Result<Estimate, SimError> {
    let acc: MeanAcc = fold_trajectories(cfg, |acc: &mut MeanAcc, rng| {
        let lr = run_loop_heads(loop_stmt, init, rng, cfg.step_cap, Some(n + 2))?;
        let value = match lr.looping_time {
            Some(t) if t <= n => finite_sample(post, &lr.heads[t as usize])?,
            Some(t) => {
                debug_assert_eq!(t, n + 1);
                finite_sample(invariant, &lr.heads[t as usize])?
            }
            None if lr.heads.len() as u64 == n + 2 => {
                finite_sample(invariant, &lr.heads[(n + 1) as usize])?
            }
            None => {
                // The loop body itself hit a step cap before the process
                // index was reached.
                acc.nonterminated += 1;
                0.0
            }
        };
        acc.w.push(value);
        Ok(())
    })?;
    Ok(Estimate {
        mean: acc.w.mean(),
        stderr: acc.w.stderr(),
        n_samples: acc.w.count(),
        nonterminated_fraction: fraction(acc.nonterminated, cfg.samples),
        seed: cfg.seed,
    })
}
