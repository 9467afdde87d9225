//! Symbolic expectation transformers for loop-free programs.
//!
//! `wp` maps a postexpectation backwards through the program; `ert`
//! additionally charges one unit per executed construct (one per skip,
//! assignment or uniform draw, one per branch dispatch, and — handled by the
//! loop machinery — one per guard evaluation).

use super::TransformError;
use crate::algebra::substitute;
use crate::syntax::{Expr, Pred, Rat, State, Stmt};
use num::{One, Signed, ToPrimitive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformerKind {
    Wp,
    Ert,
}

impl TransformerKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformerKind::Wp => "wp",
            TransformerKind::Ert => "ert",
        }
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}

fn one_plus(kind: TransformerKind, e: Expr) -> Expr {
    match kind {
        TransformerKind::Wp => e,
        TransformerKind::Ert => add(Expr::int(1), e),
    }
}

/// `[p]` as an expression.
pub fn iverson(p: Pred) -> Expr {
    Expr::Iverson(Box::new(p))
}

/// The uniform-assignment bounds must be constants so the average can be
/// unrolled symbolically.
fn constant_int(e: &Expr) -> Result<i64, TransformError> {
    let v = crate::algebra::eval_signed(e, &State::new()).map_err(|_| {
        TransformError::NonConstantUniformBounds {
            bound: e.to_string(),
        }
    })?;
    v.as_integer()
        .and_then(|n| n.to_i64())
        .ok_or_else(|| TransformError::InvalidUniformRange {
            lo: e.to_string(),
            hi: String::new(),
        })
}

/// Apply the loop-free transformer of `kind` to `f`. Fails with
/// [`TransformError::LoopEncountered`] on any `while`.
pub fn transform_loopfree(
    kind: TransformerKind,
    c: &Stmt,
    f: &Expr,
) -> Result<Expr, TransformError> {
    match c {
        Stmt::Skip => Ok(one_plus(kind, f.clone())),
        Stmt::Assign(v, e) => Ok(one_plus(kind, substitute(f, v, e))),
        Stmt::UnifAssign(v, lo, hi) => {
            let l = constant_int(lo)?;
            let h = constant_int(hi)?;
            if l > h {
                return Err(TransformError::InvalidUniformRange {
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
            let n = h - l + 1;
            let mut sum: Option<Expr> = None;
            for m in l..=h {
                let branch = substitute(f, v, &Expr::int(m));
                sum = Some(match sum {
                    None => branch,
                    Some(acc) => add(acc, branch),
                });
            }
            let avg = mul(
                Expr::Const(Rat::new(One::one(), n.into())),
                sum.expect("nonempty range"),
            );
            Ok(one_plus(kind, avg))
        }
        Stmt::Seq(a, b) => {
            let inner = transform_loopfree(kind, b, f)?;
            transform_loopfree(kind, a, &inner)
        }
        Stmt::Ite(p, t, e) => {
            let then_part = transform_loopfree(kind, t, f)?;
            let else_part = transform_loopfree(kind, e, f)?;
            let body = add(
                mul(iverson(p.clone()), then_part),
                mul(iverson(Pred::Not(Box::new(p.clone()))), else_part),
            );
            Ok(one_plus(kind, body))
        }
        Stmt::PChoice(l, p, r) => {
            if let Expr::Const(c) = p {
                if c.is_negative() || c > &Rat::one() {
                    return Err(TransformError::ProbabilityOutOfRange {
                        value: c.to_string(),
                    });
                }
            }
            let left = transform_loopfree(kind, l, f)?;
            let right = transform_loopfree(kind, r, f)?;
            let body = add(
                mul(p.clone(), left),
                mul(Expr::Sub(Box::new(Expr::int(1)), Box::new(p.clone())), right),
            );
            Ok(one_plus(kind, body))
        }
        Stmt::While(..) => Err(TransformError::LoopEncountered),
    }
}

/// Weakest preexpectation of a loop-free program.
pub fn wp_loopfree(c: &Stmt, f: &Expr) -> Result<Expr, TransformError> {
    transform_loopfree(TransformerKind::Wp, c, f)
}

/// Expected-runtime transformer of a loop-free program.
pub fn ert_loopfree(c: &Stmt, t: &Expr) -> Result<Expr, TransformError> {
    transform_loopfree(TransformerKind::Ert, c, t)
}
