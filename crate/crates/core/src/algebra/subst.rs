//! Capture-free substitution `f[v/e]`.
//!
//! Expressions bind no variables, so substitution is plain structural
//! replacement. It satisfies `eval(f[v/e], s) = eval(f, s[v := eval(e, s)])`,
//! which is what makes the assignment rule of the transformers correct; the
//! property is exercised by a randomized test.

use crate::syntax::{Expr, Pred};

pub fn substitute(f: &Expr, var: &str, e: &Expr) -> Expr {
    match f {
        Expr::Const(_) | Expr::Infinity => f.clone(),
        Expr::Var(v) => {
            if v == var {
                e.clone()
            } else {
                f.clone()
            }
        }
        Expr::Add(a, b) => Expr::Add(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Sub(a, b) => Expr::Sub(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Mul(a, b) => Expr::Mul(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Div(a, b) => Expr::Div(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Pow(a, b) => Expr::Pow(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Mod(a, b) => Expr::Mod(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Min(a, b) => Expr::Min(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Max(a, b) => Expr::Max(
            Box::new(substitute(a, var, e)),
            Box::new(substitute(b, var, e)),
        ),
        Expr::Abs(a) => Expr::Abs(Box::new(substitute(a, var, e))),
        Expr::Harm(a) => Expr::Harm(Box::new(substitute(a, var, e))),
        Expr::Iverson(p) => Expr::Iverson(Box::new(substitute_pred(p, var, e))),
    }
}

pub fn substitute_pred(p: &Pred, var: &str, e: &Expr) -> Pred {
    match p {
        Pred::Bool(_) => p.clone(),
        Pred::Cmp(op, a, b) => {
            Pred::Cmp(*op, substitute(a, var, e), substitute(b, var, e))
        }
        Pred::And(a, b) => Pred::And(
            Box::new(substitute_pred(a, var, e)),
            Box::new(substitute_pred(b, var, e)),
        ),
        Pred::Or(a, b) => Pred::Or(
            Box::new(substitute_pred(a, var, e)),
            Box::new(substitute_pred(b, var, e)),
        ),
        Pred::Not(a) => Pred::Not(Box::new(substitute_pred(a, var, e))),
    }
}
