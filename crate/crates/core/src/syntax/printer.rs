//! Pretty-printing. `parse(print(ast))` yields the same AST; the printers
//! insert parentheses only where precedence demands them.

use super::ast::*;
use num::Signed;
use std::fmt::{self, Display, Formatter, Write as _};

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) | Expr::Mod(..) => 2,
        Expr::Pow(..) => 3,
        _ => 4,
    }
}

fn fmt_expr(e: &Expr, f: &mut Formatter<'_>, min_prec: u8) -> fmt::Result {
    let prec = expr_prec(e);
    let parens = prec < min_prec;
    if parens {
        f.write_char('(')?;
    }
    match e {
        Expr::Const(c) => {
            // Negative constants only arise programmatically; print them in a
            // form the grammar accepts.
            if c.is_negative() {
                write!(f, "(0 - {})", -c)?;
            } else {
                write!(f, "{}", c)?;
            }
        }
        Expr::Infinity => f.write_str("inf")?,
        Expr::Var(v) => f.write_str(v)?,
        Expr::Add(a, b) => {
            fmt_expr(a, f, 1)?;
            f.write_str(" + ")?;
            fmt_expr(b, f, 2)?;
        }
        Expr::Sub(a, b) => {
            fmt_expr(a, f, 1)?;
            f.write_str(" - ")?;
            fmt_expr(b, f, 2)?;
        }
        Expr::Mul(a, b) => {
            fmt_expr(a, f, 2)?;
            f.write_str(" * ")?;
            fmt_expr(b, f, 3)?;
        }
        Expr::Div(a, b) => {
            fmt_expr(a, f, 2)?;
            f.write_str(" / ")?;
            fmt_expr(b, f, 3)?;
        }
        Expr::Mod(a, b) => {
            fmt_expr(a, f, 2)?;
            f.write_str(" % ")?;
            fmt_expr(b, f, 3)?;
        }
        Expr::Pow(a, b) => {
            fmt_expr(a, f, 4)?; // left operand of ^ binds tighter
            f.write_str("^")?;
            fmt_expr(b, f, 3)?;
        }
        Expr::Min(a, b) => {
            f.write_str("min(")?;
            fmt_expr(a, f, 0)?;
            f.write_str(", ")?;
            fmt_expr(b, f, 0)?;
            f.write_char(')')?;
        }
        Expr::Max(a, b) => {
            f.write_str("max(")?;
            fmt_expr(a, f, 0)?;
            f.write_str(", ")?;
            fmt_expr(b, f, 0)?;
            f.write_char(')')?;
        }
        Expr::Abs(a) => {
            f.write_str("abs(")?;
            fmt_expr(a, f, 0)?;
            f.write_char(')')?;
        }
        Expr::Harm(a) => {
            f.write_str("harm(")?;
            fmt_expr(a, f, 0)?;
            f.write_char(')')?;
        }
        Expr::Iverson(p) => {
            f.write_char('[')?;
            fmt_pred(p, f, 0)?;
            f.write_char(']')?;
        }
    }
    if parens {
        f.write_char(')')?;
    }
    Ok(())
}

fn pred_prec(p: &Pred) -> u8 {
    match p {
        Pred::Or(..) => 1,
        Pred::And(..) => 2,
        _ => 3,
    }
}

fn fmt_pred(p: &Pred, f: &mut Formatter<'_>, min_prec: u8) -> fmt::Result {
    let prec = pred_prec(p);
    let parens = prec < min_prec;
    if parens {
        f.write_char('(')?;
    }
    match p {
        Pred::Bool(true) => f.write_str("true")?,
        Pred::Bool(false) => f.write_str("false")?,
        Pred::Cmp(op, a, b) => {
            fmt_expr(a, f, 0)?;
            write!(f, " {} ", op.symbol())?;
            fmt_expr(b, f, 0)?;
        }
        Pred::And(a, b) => {
            fmt_pred(a, f, 2)?;
            f.write_str(" and ")?;
            fmt_pred(b, f, 3)?;
        }
        Pred::Or(a, b) => {
            fmt_pred(a, f, 1)?;
            f.write_str(" or ")?;
            fmt_pred(b, f, 2)?;
        }
        Pred::Not(a) => {
            f.write_str("not ")?;
            fmt_pred(a, f, 3)?;
        }
    }
    if parens {
        f.write_char(')')?;
    }
    Ok(())
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_expr(self, f, 0)
    }
}

impl Display for Pred {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_pred(self, f, 0)
    }
}

fn is_atomic(s: &Stmt) -> bool {
    matches!(s, Stmt::Skip | Stmt::Assign(..) | Stmt::UnifAssign(..))
}

fn fmt_stmt(s: &Stmt, f: &mut Formatter<'_>, indent: usize) -> fmt::Result {
    let pad = "  ".repeat(indent);
    match s {
        Stmt::Skip => write!(f, "{}skip", pad),
        Stmt::Assign(v, e) => write!(f, "{}{} := {}", pad, v, e),
        Stmt::UnifAssign(v, lo, hi) => write!(f, "{}{} := unif({}..{})", pad, v, lo, hi),
        Stmt::Seq(a, b) => {
            fmt_stmt(a, f, indent)?;
            f.write_str(";\n")?;
            fmt_stmt(b, f, indent)
        }
        Stmt::Ite(p, t, e) => {
            write!(f, "{}if ({}) {{\n", pad, p)?;
            fmt_stmt(t, f, indent + 1)?;
            write!(f, "\n{}}}", pad)?;
            if **e != Stmt::Skip {
                f.write_str(" else {\n")?;
                fmt_stmt(e, f, indent + 1)?;
                write!(f, "\n{}}}", pad)?;
            }
            Ok(())
        }
        Stmt::While(p, b) => {
            write!(f, "{}while ({}) {{\n", pad, p)?;
            fmt_stmt(b, f, indent + 1)?;
            write!(f, "\n{}}}", pad)
        }
        Stmt::PChoice(l, prob, r) => {
            if is_atomic(l) && is_atomic(r) {
                write!(f, "{}{{ ", pad)?;
                fmt_stmt(l, f, 0)?;
                write!(f, " }} [{}] {{ ", prob)?;
                fmt_stmt(r, f, 0)?;
                f.write_str(" }")
            } else {
                write!(f, "{}{{\n", pad)?;
                fmt_stmt(l, f, indent + 1)?;
                write!(f, "\n{}}} [{}] {{\n", pad, prob)?;
                fmt_stmt(r, f, indent + 1)?;
                write!(f, "\n{}}}", pad)
            }
        }
    }
}

impl Display for Stmt {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        fmt_stmt(self, f, 0)
    }
}

impl Display for DomainValues {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            DomainValues::Range(lo, hi) => write!(f, "{}..{}", lo, hi),
            DomainValues::Set(vs) => {
                f.write_char('{')?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", v)?;
                }
                f.write_char('}')
            }
        }
    }
}

impl Display for StateDomain {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, (var, vals)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} in {}", var, vals)?;
        }
        Ok(())
    }
}
