//! Characteristic functions of loops, symbolically.
//!
//! For `while (φ) { C }` with postexpectation `f`, one application of the
//! characteristic function is
//!
//! ```text
//! wp:   Φ_f(X) = [¬φ]·f + [φ]·wp(C, X)
//! ert:  Φ_t(X) = 1 + [¬φ]·t + [φ]·ert(C, X)
//! ```
//!
//! and the loop's transformer value is the least fixed point of Φ. These
//! builders require a loop-free body (the numeric engine in
//! [`super::fixpoint`] handles nested loops).

use super::loopfree::{iverson, transform_loopfree, TransformerKind};
use super::TransformError;
use crate::syntax::{Expr, Pred, Stmt};

fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}

/// Destructure a `while` statement.
pub fn as_loop(stmt: &Stmt) -> Result<(&Pred, &Stmt), TransformError> {
    match stmt {
        Stmt::While(guard, body) => Ok((guard, body)),
        _ => Err(TransformError::NotALoop),
    }
}

/// One application `Φ_f(x)` of the characteristic function of `loop_stmt`.
pub fn char_apply(
    kind: TransformerKind,
    loop_stmt: &Stmt,
    f: &Expr,
    x: &Expr,
) -> Result<Expr, TransformError> {
    let (guard, body) = as_loop(loop_stmt)?;
    let body_part = transform_loopfree(kind, body, x)?;
    let core = add(
        mul(iverson(Pred::Not(Box::new(guard.clone()))), f.clone()),
        mul(iverson(guard.clone()), body_part),
    );
    Ok(match kind {
        TransformerKind::Wp => core,
        TransformerKind::Ert => add(Expr::int(1), core),
    })
}

/// The iterate sequence `[start, Φ(start), Φ²(start), …, Φⁿ(start)]`
/// (n + 1 entries). Iterating from `0` yields the Kleene approximations of
/// the loop's transformer from below.
pub fn iterate_char(
    kind: TransformerKind,
    loop_stmt: &Stmt,
    f: &Expr,
    start: &Expr,
    n: usize,
) -> Result<Vec<Expr>, TransformError> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(start.clone());
    for _ in 0..n {
        let next = char_apply(kind, loop_stmt, f, out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}
