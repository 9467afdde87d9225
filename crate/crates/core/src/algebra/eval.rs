//! Expectation and predicate evaluation over program states.

use super::value::{harmonic, ExtReal};
use super::AlgebraError;
use crate::syntax::{CmpOp, Expr, Pred, State};
use std::cmp::Ordering;

/// Evaluate an expectation at a state. The final value must be non-negative;
/// intermediates may dip below zero (e.g. inside `abs`).
pub fn eval(f: &Expr, s: &State) -> Result<ExtReal, AlgebraError> {
    let v = eval_signed(f, s)?;
    if v.is_negative() {
        return Err(AlgebraError::NegativeExpectation {
            value: v.to_string(),
        });
    }
    Ok(v)
}

/// Evaluate without the final sign check. Multiplication evaluates its left
/// factor first and short-circuits to 0 on an exactly-zero factor, which both
/// implements the `0 * inf = 0` convention and gives Iverson-guarded
/// subexpressions (`[x > 0] * (1 / x)`) a total meaning.
pub fn eval_signed(f: &Expr, s: &State) -> Result<ExtReal, AlgebraError> {
    match f {
        Expr::Const(c) => Ok(ExtReal::Rat(c.clone())),
        Expr::Infinity => Ok(ExtReal::Infinity),
        Expr::Var(v) => match s.get(v) {
            Some(r) => Ok(ExtReal::Rat(r.clone())),
            None => Err(AlgebraError::UnboundVariable { var: v.clone() }),
        },
        Expr::Add(a, b) => eval_signed(a, s)?.add(&eval_signed(b, s)?),
        Expr::Sub(a, b) => eval_signed(a, s)?.sub(&eval_signed(b, s)?),
        Expr::Mul(a, b) => {
            let lhs = eval_signed(a, s)?;
            if lhs.is_zero() {
                return Ok(ExtReal::zero());
            }
            let rhs = eval_signed(b, s)?;
            if rhs.is_zero() {
                return Ok(ExtReal::zero());
            }
            lhs.mul(&rhs)
        }
        Expr::Div(a, b) => eval_signed(a, s)?.div(&eval_signed(b, s)?),
        Expr::Pow(a, b) => eval_signed(a, s)?.pow(&eval_signed(b, s)?),
        Expr::Mod(a, b) => eval_signed(a, s)?.rem(&eval_signed(b, s)?),
        Expr::Min(a, b) => Ok(eval_signed(a, s)?.min(&eval_signed(b, s)?)),
        Expr::Max(a, b) => Ok(eval_signed(a, s)?.max(&eval_signed(b, s)?)),
        Expr::Abs(a) => Ok(eval_signed(a, s)?.abs()),
        Expr::Iverson(p) => Ok(if eval_pred(p, s)? {
            ExtReal::one()
        } else {
            ExtReal::zero()
        }),
        Expr::Harm(a) => {
            let v = eval_signed(a, s)?;
            let n = v.as_integer().ok_or_else(|| {
                AlgebraError::NonIntegerOperand(format!("harm({})", v))
            })?;
            Ok(ExtReal::Rat(harmonic(&n)?))
        }
    }
}

pub fn eval_pred(p: &Pred, s: &State) -> Result<bool, AlgebraError> {
    match p {
        Pred::Bool(b) => Ok(*b),
        Pred::Cmp(op, a, b) => {
            let lhs = eval_signed(a, s)?;
            let rhs = eval_signed(b, s)?;
            let ord = lhs.cmp_exact(&rhs);
            Ok(match op {
                CmpOp::Lt => ord == Ordering::Less,
                CmpOp::Le => ord != Ordering::Greater,
                CmpOp::Gt => ord == Ordering::Greater,
                CmpOp::Ge => ord != Ordering::Less,
                CmpOp::Eq => ord == Ordering::Equal,
                CmpOp::Ne => ord != Ordering::Equal,
            })
        }
        Pred::And(a, b) => Ok(eval_pred(a, s)? && eval_pred(b, s)?),
        Pred::Or(a, b) => Ok(eval_pred(a, s)? || eval_pred(b, s)?),
        Pred::Not(a) => Ok(!eval_pred(a, s)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expectation, parse_predicate, Rat};

    fn at(src: &str, pairs: &[(&str, i64)]) -> Result<ExtReal, AlgebraError> {
        let e = parse_expectation(src).unwrap();
        let mut s = State::new();
        for (v, n) in pairs {
            s = s.bind(v, *n);
        }
        eval(&e, &s)
    }

    fn rat(n: i64, d: i64) -> ExtReal {
        ExtReal::Rat(Rat::new(n.into(), d.into()))
    }

    #[test]
    fn arithmetic_stays_rational() {
        assert_eq!(at("4/5*b + 6", &[("b", 3)]).unwrap(), rat(42, 5));
        assert_eq!(at("2 ^ 10", &[]).unwrap(), rat(1024, 1));
        assert_eq!(at("2 ^ (0 - 2)", &[]).unwrap(), rat(1, 4));
    }

    #[test]
    fn fractional_exponents_fall_back_to_floats() {
        let v = at("2 ^ (1/2)", &[]).unwrap();
        assert!(v.is_float());
        assert!((v.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-12);
        let v = at("2 ^ (x/2) * y", &[("x", 4), ("y", 3)]).unwrap();
        // Even exponent: exact despite the division in the exponent.
        assert_eq!(v.to_f64(), 12.0);
    }

    #[test]
    fn zero_annihilates_even_infinity_and_errors() {
        assert_eq!(at("0 * inf", &[]).unwrap(), rat(0, 1));
        // The guarded factor is never evaluated once the guard is 0, so the
        // division by zero inside it is harmless.
        assert_eq!(at("[x > 0] * (1 / (2 + 1/x))", &[("x", 0)]).unwrap(), rat(0, 1));
        assert_eq!(at("[x > 0] * (1 / (2 + 1/x))", &[("x", 1)]).unwrap(), rat(1, 3));
    }

    #[test]
    fn infinity_absorbs_addition_and_dominates_division() {
        assert_eq!(at("inf + 1", &[]).unwrap(), ExtReal::Infinity);
        assert_eq!(at("5 / inf", &[]).unwrap(), rat(0, 1));
        assert_eq!(at("inf * 2", &[]).unwrap(), ExtReal::Infinity);
    }

    #[test]
    fn undefined_forms_are_errors() {
        assert_eq!(at("1 / 0", &[]).unwrap_err(), AlgebraError::DivisionByZero);
        assert!(matches!(at("inf - inf", &[]).unwrap_err(), AlgebraError::Undefined(_)));
        assert!(matches!(at("inf / inf", &[]).unwrap_err(), AlgebraError::Undefined(_)));
    }

    #[test]
    fn negative_results_are_rejected_only_at_the_top() {
        let err = at("x - 5", &[("x", 3)]).unwrap_err();
        assert!(matches!(err, AlgebraError::NegativeExpectation { .. }));
        // ... but are fine as intermediates:
        assert_eq!(at("abs(x - 5)", &[("x", 3)]).unwrap(), rat(2, 1));
        let e = parse_expectation("x - 5").unwrap();
        let v = eval_signed(&e, &State::new().bind("x", 3)).unwrap();
        assert_eq!(v, rat(-2, 1));
    }

    #[test]
    fn unbound_variables_are_reported_by_name() {
        assert_eq!(
            at("x + y", &[("x", 1)]).unwrap_err(),
            AlgebraError::UnboundVariable { var: "y".to_string() }
        );
    }

    #[test]
    fn remainder_is_euclidean() {
        assert_eq!(at("x % 2", &[("x", 7)]).unwrap(), rat(1, 1));
        assert_eq!(at("(0 - 3) % 2", &[]).unwrap(), rat(1, 1));
        assert!(matches!(
            at("x % 2", &[]).unwrap_err(),
            AlgebraError::UnboundVariable { .. }
        ));
        let e = parse_expectation("(1/2) % 2").unwrap();
        assert!(matches!(
            eval_signed(&e, &State::new()).unwrap_err(),
            AlgebraError::NonIntegerOperand(_)
        ));
    }

    #[test]
    fn harmonic_numbers_are_exact_and_total() {
        assert_eq!(at("harm(4)", &[]).unwrap(), rat(25, 12));
        assert_eq!(at("harm(0)", &[]).unwrap(), rat(0, 1));
        assert_eq!(at("harm(0 - 3)", &[]).unwrap(), rat(0, 1));
    }

    #[test]
    fn min_max_abs_follow_the_exact_order() {
        assert_eq!(at("min(3, 1/2)", &[]).unwrap(), rat(1, 2));
        assert_eq!(at("max(y - 1, 0)", &[("y", 0)]).unwrap(), rat(0, 1));
        assert_eq!(at("min(x, inf)", &[("x", 9)]).unwrap(), rat(9, 1));
    }

    #[test]
    fn predicates_evaluate_over_rationals() {
        let p = parse_predicate("x % 2 = 0 and x < 10").unwrap();
        assert!(eval_pred(&p, &State::new().bind("x", 4)).unwrap());
        assert!(!eval_pred(&p, &State::new().bind("x", 5)).unwrap());
        assert!(!eval_pred(&p, &State::new().bind("x", 12)).unwrap());
        let p = parse_predicate("not (x = 0 or x = 1)").unwrap();
        assert!(eval_pred(&p, &State::new().bind("x", 2)).unwrap());
        assert!(!eval_pred(&p, &State::new().bind("x", 1)).unwrap());
    }

    #[test]
    fn iverson_brackets_are_zero_or_one() {
        assert_eq!(at("[x > 0 and x < 5]", &[("x", 3)]).unwrap(), rat(1, 1));
        assert_eq!(at("[x > 0 and x < 5]", &[("x", 5)]).unwrap(), rat(0, 1));
        assert_eq!(at("[true] + [false]", &[]).unwrap(), rat(1, 1));
    }
}
