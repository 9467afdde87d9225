//! Extended-real values.
//!
//! A value is an exact rational, a finite 64-bit float, or positive infinity.
//! Arithmetic stays rational as long as every operand is rational and the
//! operation is closed over the rationals; anything irrational (`2^(1/2)`)
//! demotes the result to a float. Negative values are legal as intermediates
//! (the difference inside `abs(I - c)` needs them); expectation evaluation
//! rejects a negative *final* value.
//!
//! Conventions, applied unconditionally: `0 * inf = 0`, `c * inf = inf` for
//! `c > 0`, `inf + x = inf`, `x / inf = 0`. `inf - inf`, `inf / inf`,
//! division by zero and `neg * inf` are errors, as is any operation that
//! would produce NaN or negative infinity.

use super::AlgebraError;
use crate::syntax::Rat;
use num::{BigInt, FromPrimitive, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone)]
pub enum ExtReal {
    Rat(Rat),
    Float(f64),
    Infinity,
}

impl ExtReal {
    pub fn zero() -> ExtReal {
        ExtReal::Rat(Rat::zero())
    }

    pub fn one() -> ExtReal {
        ExtReal::from_int(1)
    }

    pub fn from_int(n: i64) -> ExtReal {
        ExtReal::Rat(Rat::from_integer(n.into()))
    }

    pub fn from_rat(r: Rat) -> ExtReal {
        ExtReal::Rat(r)
    }

    /// Wrap a float, normalising the infinities and rejecting NaN.
    pub fn from_f64(x: f64) -> Result<ExtReal, AlgebraError> {
        if x.is_nan() {
            Err(AlgebraError::NotANumber)
        } else if x == f64::INFINITY {
            Ok(ExtReal::Infinity)
        } else if x == f64::NEG_INFINITY {
            Err(AlgebraError::Undefined("negative infinity".into()))
        } else {
            Ok(ExtReal::Float(x))
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, ExtReal::Infinity)
    }

    pub fn is_float(&self) -> bool {
        matches!(self, ExtReal::Float(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExtReal::Rat(r) => r.is_zero(),
            ExtReal::Float(x) => *x == 0.0,
            ExtReal::Infinity => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExtReal::Rat(r) => r.is_negative(),
            ExtReal::Float(x) => *x < 0.0,
            ExtReal::Infinity => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Rat(r) => r.to_f64().unwrap_or_else(|| {
                // Magnitudes beyond f64 range collapse to signed infinity.
                if r.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }),
            ExtReal::Float(x) => *x,
            ExtReal::Infinity => f64::INFINITY,
        }
    }

    /// Exact rational view, when the value is rational.
    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            ExtReal::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn add(&self, other: &ExtReal) -> Result<ExtReal, AlgebraError> {
        match (self, other) {
            (ExtReal::Infinity, _) | (_, ExtReal::Infinity) => Ok(ExtReal::Infinity),
            (ExtReal::Rat(a), ExtReal::Rat(b)) => Ok(ExtReal::Rat(a + b)),
            _ => ExtReal::from_f64(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &ExtReal) -> Result<ExtReal, AlgebraError> {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => {
                Err(AlgebraError::Undefined("inf - inf".into()))
            }
            (ExtReal::Infinity, _) => Ok(ExtReal::Infinity),
            (_, ExtReal::Infinity) => {
                Err(AlgebraError::Undefined("finite - inf".into()))
            }
            (ExtReal::Rat(a), ExtReal::Rat(b)) => Ok(ExtReal::Rat(a - b)),
            _ => ExtReal::from_f64(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &ExtReal) -> Result<ExtReal, AlgebraError> {
        // 0 * inf = 0 by convention, so zero wins over infinity.
        if self.is_zero() || other.is_zero() {
            return Ok(ExtReal::zero());
        }
        match (self, other) {
            (ExtReal::Infinity, x) | (x, ExtReal::Infinity) => {
                if x.is_negative() {
                    Err(AlgebraError::Undefined("negative * inf".into()))
                } else {
                    Ok(ExtReal::Infinity)
                }
            }
            (ExtReal::Rat(a), ExtReal::Rat(b)) => Ok(ExtReal::Rat(a * b)),
            _ => ExtReal::from_f64(self.to_f64() * other.to_f64()),
        }
    }

    pub fn div(&self, other: &ExtReal) -> Result<ExtReal, AlgebraError> {
        match (self, other) {
            (_, x) if x.is_zero() => Err(AlgebraError::DivisionByZero),
            (ExtReal::Infinity, ExtReal::Infinity) => {
                Err(AlgebraError::Undefined("inf / inf".into()))
            }
            (ExtReal::Infinity, x) => {
                if x.is_negative() {
                    Err(AlgebraError::Undefined("inf / negative".into()))
                } else {
                    Ok(ExtReal::Infinity)
                }
            }
            (_, ExtReal::Infinity) => Ok(ExtReal::zero()),
            (ExtReal::Rat(a), ExtReal::Rat(b)) => Ok(ExtReal::Rat(a / b)),
            _ => ExtReal::from_f64(self.to_f64() / other.to_f64()),
        }
    }

    /// Exponentiation. Rational base with integer exponent stays exact;
    /// everything else goes through `powf`.
    pub fn pow(&self, exp: &ExtReal) -> Result<ExtReal, AlgebraError> {
        const MAX_EXACT_EXP: i64 = 4096;
        let exp_int = match exp {
            ExtReal::Rat(r) if r.is_integer() => r.to_integer().to_i64(),
            ExtReal::Float(x) if x.fract() == 0.0 && x.abs() < 1e15 => Some(*x as i64),
            ExtReal::Infinity => {
                return Err(AlgebraError::Undefined("infinite exponent".into()))
            }
            _ => None,
        };
        match exp_int {
            Some(0) => Ok(ExtReal::one()), // includes 0^0 = 1 and inf^0 = 1
            Some(k) => {
                match self {
                    ExtReal::Infinity => Ok(if k > 0 {
                        ExtReal::Infinity
                    } else {
                        ExtReal::zero()
                    }),
                    _ if self.is_zero() => {
                        if k > 0 {
                            Ok(ExtReal::zero())
                        } else {
                            Err(AlgebraError::DivisionByZero)
                        }
                    }
                    ExtReal::Rat(r) => {
                        if k.abs() > MAX_EXACT_EXP {
                            return Err(AlgebraError::ExponentOverflow(k));
                        }
                        let p = num::pow::pow(r.clone(), k.unsigned_abs() as usize);
                        if k > 0 {
                            Ok(ExtReal::Rat(p))
                        } else {
                            Ok(ExtReal::Rat(p.recip()))
                        }
                    }
                    ExtReal::Float(x) => ExtReal::from_f64(x.powi(k.clamp(
                        i32::MIN as i64,
                        i32::MAX as i64,
                    ) as i32)),
                }
            }
            None => {
                // Fractional exponent: float fallback.
                let e = exp.to_f64();
                match self {
                    ExtReal::Infinity => Ok(if e > 0.0 {
                        ExtReal::Infinity
                    } else {
                        ExtReal::zero()
                    }),
                    _ if self.is_zero() => {
                        if e > 0.0 {
                            Ok(ExtReal::zero())
                        } else {
                            Err(AlgebraError::DivisionByZero)
                        }
                    }
                    _ => {
                        let b = self.to_f64();
                        if b < 0.0 {
                            return Err(AlgebraError::Undefined(
                                "negative base with fractional exponent".into(),
                            ));
                        }
                        ExtReal::from_f64(b.powf(e))
                    }
                }
            }
        }
    }

    /// Remainder. Both operands must be finite integers.
    pub fn rem(&self, other: &ExtReal) -> Result<ExtReal, AlgebraError> {
        let a = self.as_integer().ok_or_else(|| {
            AlgebraError::NonIntegerOperand("left operand of %".into())
        })?;
        let b = other.as_integer().ok_or_else(|| {
            AlgebraError::NonIntegerOperand("right operand of %".into())
        })?;
        if b.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let r = ((a.clone() % b.clone()) + b.clone()) % b; // euclidean
        Ok(ExtReal::Rat(Rat::from_integer(r)))
    }

    /// Integer view of the value, if it is an exact integer (floats qualify
    /// when their fractional part is zero).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            ExtReal::Rat(r) if r.is_integer() => Some(r.to_integer()),
            ExtReal::Float(x) if x.fract() == 0.0 && x.is_finite() => {
                BigInt::from_f64(*x)
            }
            _ => None,
        }
    }

    pub fn abs(&self) -> ExtReal {
        match self {
            ExtReal::Rat(r) => ExtReal::Rat(r.abs()),
            ExtReal::Float(x) => ExtReal::Float(x.abs()),
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }

    pub fn min(&self, other: &ExtReal) -> ExtReal {
        if self.cmp_exact(other) == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &ExtReal) -> ExtReal {
        if self.cmp_exact(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Total order on values; rational-rational comparisons are exact.
    pub fn cmp_exact(&self, other: &ExtReal) -> Ordering {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
            (ExtReal::Infinity, _) => Ordering::Greater,
            (_, ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Rat(a), ExtReal::Rat(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .expect("no NaN values"),
        }
    }

    /// `self <= other + tol`, exact when both sides are rational.
    pub fn leq_with_tol(&self, other: &ExtReal, tol: f64) -> bool {
        match (self, other) {
            (_, ExtReal::Infinity) => true,
            (ExtReal::Infinity, _) => false,
            (ExtReal::Rat(a), ExtReal::Rat(b)) => {
                if tol == 0.0 {
                    a <= b
                } else {
                    let t = Rat::from_float(tol).expect("finite tolerance");
                    *a <= b + t
                }
            }
            _ => self.to_f64() <= other.to_f64() + tol,
        }
    }

    /// `max(self - other, 0)` as a violation magnitude; infinity minus any
    /// finite value is infinity.
    pub fn gap_above(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => ExtReal::zero(),
            (ExtReal::Infinity, _) => ExtReal::Infinity,
            (_, ExtReal::Infinity) => ExtReal::zero(),
            (ExtReal::Rat(a), ExtReal::Rat(b)) => {
                let d = a - b;
                if d.is_negative() {
                    ExtReal::zero()
                } else {
                    ExtReal::Rat(d)
                }
            }
            _ => ExtReal::Float((self.to_f64() - other.to_f64()).max(0.0)),
        }
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::Rat(r) => write!(f, "{}", r),
            ExtReal::Float(x) => write!(f, "{}", x),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

impl serde::Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// n-th harmonic number, exactly; 0 for n <= 0.
pub fn harmonic(n: &BigInt) -> Result<Rat, AlgebraError> {
    let n = n.to_i64().ok_or(AlgebraError::HarmonicOverflow)?;
    if n > 10_000 {
        return Err(AlgebraError::HarmonicOverflow);
    }
    let mut acc = Rat::zero();
    for k in 1..=n.max(0) {
        acc += Rat::new(1.into(), k.into());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> ExtReal {
        ExtReal::Rat(Rat::new(n.into(), d.into()))
    }

    #[test]
    fn zero_beats_infinity_in_products() {
        assert_eq!(ExtReal::zero().mul(&ExtReal::Infinity).unwrap(), ExtReal::zero());
        assert_eq!(ExtReal::Infinity.mul(&ExtReal::zero()).unwrap(), ExtReal::zero());
        assert_eq!(rat(2, 1).mul(&ExtReal::Infinity).unwrap(), ExtReal::Infinity);
        assert!(rat(-1, 1).mul(&ExtReal::Infinity).is_err());
    }

    #[test]
    fn subtraction_from_infinity_is_partial() {
        assert_eq!(ExtReal::Infinity.sub(&rat(5, 1)).unwrap(), ExtReal::Infinity);
        assert!(ExtReal::Infinity.sub(&ExtReal::Infinity).is_err());
        assert!(rat(5, 1).sub(&ExtReal::Infinity).is_err());
    }

    #[test]
    fn float_construction_filters_non_values() {
        assert!(matches!(ExtReal::from_f64(1.5).unwrap(), ExtReal::Float(_)));
        assert_eq!(ExtReal::from_f64(f64::INFINITY).unwrap(), ExtReal::Infinity);
        assert_eq!(ExtReal::from_f64(f64::NAN).unwrap_err(), AlgebraError::NotANumber);
        assert!(ExtReal::from_f64(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn comparisons_mix_rationals_and_floats() {
        assert_eq!(rat(1, 3).cmp_exact(&rat(1, 3)), std::cmp::Ordering::Equal);
        assert_eq!(rat(1, 3).cmp_exact(&rat(2, 5)), std::cmp::Ordering::Less);
        assert_eq!(
            ExtReal::Float(0.5).cmp_exact(&rat(1, 4)),
            std::cmp::Ordering::Greater
        );
        assert_eq!(ExtReal::Infinity.cmp_exact(&ExtReal::Float(1e300)), std::cmp::Ordering::Greater);
    }

    #[test]
    fn tolerant_ordering_is_exact_for_rationals() {
        assert!(rat(1, 3).leq_with_tol(&rat(1, 3), 0.0));
        assert!(!rat(1, 3).leq_with_tol(&rat(33333, 100000), 0.0));
        assert!(rat(1, 3).leq_with_tol(&rat(33333, 100000), 1e-4));
        assert!(rat(5, 1).leq_with_tol(&ExtReal::Infinity, 0.0));
        assert!(!ExtReal::Infinity.leq_with_tol(&rat(5, 1), 1e9));
    }

    #[test]
    fn violation_gaps_clamp_at_zero() {
        assert_eq!(rat(3, 1).gap_above(&rat(5, 1)), ExtReal::zero());
        assert_eq!(rat(5, 1).gap_above(&rat(3, 1)), rat(2, 1));
        assert_eq!(ExtReal::Infinity.gap_above(&rat(3, 1)), ExtReal::Infinity);
        assert_eq!(ExtReal::Infinity.gap_above(&ExtReal::Infinity), ExtReal::zero());
    }

    #[test]
    fn integer_views_accept_round_floats() {
        assert_eq!(rat(6, 2).as_integer(), Some(BigInt::from(3)));
        assert_eq!(rat(1, 2).as_integer(), None);
        assert_eq!(ExtReal::Float(3.0).as_integer(), Some(BigInt::from(3)));
        assert_eq!(ExtReal::Float(3.5).as_integer(), None);
        assert_eq!(ExtReal::Infinity.as_integer(), None);
    }

    #[test]
    fn exact_exponentiation_has_a_size_guard() {
        assert_eq!(rat(2, 1).pow(&rat(12, 1)).unwrap(), rat(4096, 1));
        assert_eq!(rat(2, 1).pow(&rat(0, 1)).unwrap(), rat(1, 1));
        assert_eq!(ExtReal::zero().pow(&rat(0, 1)).unwrap(), rat(1, 1));
        assert!(matches!(
            rat(2, 1).pow(&rat(5000, 1)).unwrap_err(),
            AlgebraError::ExponentOverflow(5000)
        ));
    }

    #[test]
    fn harmonic_prefix_is_the_known_sequence() {
        let h: Vec<Rat> = (0..5)
            .map(|n| harmonic(&BigInt::from(n)).unwrap())
            .collect();
        assert_eq!(h[0], Rat::from_integer(0.into()));
        assert_eq!(h[1], Rat::from_integer(1.into()));
        assert_eq!(h[2], Rat::new(3.into(), 2.into()));
        assert_eq!(h[3], Rat::new(11.into(), 6.into()));
        assert_eq!(h[4], Rat::new(25.into(), 12.into()));
    }
}
