//! Signed extension of the term language.
//!
//! Adds true subtraction to the six term operations and evaluates over the
//! integers. Floored division rounds toward negative infinity and `a mod b`
//! is the Euclidean remainder in `[0, |b|)`. Division or remainder by zero is
//! an error here: the totalizing conventions only cover the natural-valued
//! language.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Euclid, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::term::{Env, Term, MAX_POW_BITS};
use crate::Natural;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignedEvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent {0}")]
    NegativeExponent(BigInt),
    #[error("exponent {0} is too large to evaluate")]
    ExponentTooLarge(BigInt),
}

/// An integer split into sign and magnitude; the sign is `NoSign` exactly for zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedValue {
    sign: Sign,
    magnitude: Natural,
}

impl SignedValue {
    pub fn new(sign: Sign, magnitude: Natural) -> Self {
        let sign = if magnitude.is_zero() {
            Sign::NoSign
        } else if sign == Sign::NoSign {
            Sign::Plus
        } else {
            sign
        };
        SignedValue { sign, magnitude }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.sign {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn magnitude(&self) -> &Natural {
        &self.magnitude
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(self.sign, self.magnitude.clone())
    }

    /// The value as a natural, if it is non-negative.
    pub fn to_natural(&self) -> Option<Natural> {
        (self.sign != Sign::Minus).then(|| self.magnitude.clone())
    }
}

impl From<BigInt> for SignedValue {
    fn from(v: BigInt) -> Self {
        let (sign, magnitude) = v.into_parts();
        SignedValue::new(sign, magnitude)
    }
}

impl From<Natural> for SignedValue {
    fn from(v: Natural) -> Self {
        SignedValue::new(Sign::Plus, v)
    }
}

impl fmt::Display for SignedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_bigint(), f)
    }
}

/// Expression of the signed dialect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignedExpr {
    Const(Natural),
    Var(String),
    Add(Box<SignedExpr>, Box<SignedExpr>),
    /// True subtraction.
    Sub(Box<SignedExpr>, Box<SignedExpr>),
    /// `max(a - b, 0)`, kept so every term embeds.
    TruncSub(Box<SignedExpr>, Box<SignedExpr>),
    Mul(Box<SignedExpr>, Box<SignedExpr>),
    FloorDiv(Box<SignedExpr>, Box<SignedExpr>),
    Mod(Box<SignedExpr>, Box<SignedExpr>),
    Pow(Box<SignedExpr>, Box<SignedExpr>),
}

macro_rules! ctor {
    ($($name:ident => $variant:ident),*) => {$(
        pub fn $name(self, rhs: SignedExpr) -> SignedExpr {
            SignedExpr::$variant(Box::new(self), Box::new(rhs))
        }
    )*};
}

macro_rules! op {
    ($($tr:ident :: $method:ident => $variant:ident),*) => {$(
        impl std::ops::$tr for SignedExpr {
            type Output = SignedExpr;
            fn $method(self, rhs: SignedExpr) -> SignedExpr {
                SignedExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    )*};
}

op!(Add::add => Add, Sub::sub => Sub, Mul::mul => Mul, Rem::rem => Mod);

impl SignedExpr {
    pub fn constant(v: impl Into<Natural>) -> Self {
        SignedExpr::Const(v.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        SignedExpr::Var(name.into())
    }

    ctor!(monus => TruncSub, floor_div => FloorDiv, pow => Pow);

    /// `true` if the expression uses true subtraction anywhere.
    pub fn has_subtraction(&self) -> bool {
        match self {
            SignedExpr::Const(_) | SignedExpr::Var(_) => false,
            SignedExpr::Sub(..) => true,
            SignedExpr::Add(l, r)
            | SignedExpr::TruncSub(l, r)
            | SignedExpr::Mul(l, r)
            | SignedExpr::FloorDiv(l, r)
            | SignedExpr::Mod(l, r)
            | SignedExpr::Pow(l, r) => l.has_subtraction() || r.has_subtraction(),
        }
    }

    pub fn eval(&self, env: &Env) -> Result<BigInt, SignedEvalError> {
        let bin = |l: &SignedExpr, r: &SignedExpr| -> Result<(BigInt, BigInt), SignedEvalError> {
            Ok((l.eval(env)?, r.eval(env)?))
        };
        Ok(match self {
            SignedExpr::Const(c) => BigInt::from(c.clone()),
            SignedExpr::Var(name) => env
                .get(name)
                .map(|v| BigInt::from(v.clone()))
                .ok_or_else(|| SignedEvalError::UnboundVariable(name.clone()))?,
            SignedExpr::Add(l, r) => {
                let (a, b) = bin(l, r)?;
                a + b
            }
            SignedExpr::Sub(l, r) => {
                let (a, b) = bin(l, r)?;
                a - b
            }
            SignedExpr::TruncSub(l, r) => {
                let (a, b) = bin(l, r)?;
                if a > b {
                    a - b
                } else {
                    BigInt::zero()
                }
            }
            SignedExpr::Mul(l, r) => {
                let (a, b) = bin(l, r)?;
                a * b
            }
            SignedExpr::FloorDiv(l, r) => {
                let (a, b) = bin(l, r)?;
                if b.is_zero() {
                    return Err(SignedEvalError::DivisionByZero);
                }
                a.div_floor(&b)
            }
            SignedExpr::Mod(l, r) => {
                let (a, b) = bin(l, r)?;
                if b.is_zero() {
                    return Err(SignedEvalError::DivisionByZero);
                }
                a.rem_euclid(&b)
            }
            SignedExpr::Pow(l, r) => {
                let (a, b) = bin(l, r)?;
                signed_pow(a, b)?
            }
        })
    }
}

fn signed_pow(base: BigInt, exp: BigInt) -> Result<BigInt, SignedEvalError> {
    if exp.is_negative() {
        return Err(SignedEvalError::NegativeExponent(exp));
    }
    if exp.is_zero() {
        return Ok(BigInt::from(1));
    }
    if base.magnitude() <= &Natural::from(1u8) {
        // 0, 1 and -1 cycle without growing.
        return Ok(if base.is_negative() && exp.is_even() {
            -base
        } else {
            base
        });
    }
    let e = exp
        .to_u64()
        .filter(|e| (base.bits() - 1).saturating_mul(*e).saturating_add(1) <= MAX_POW_BITS)
        .and_then(|e| usize::try_from(e).ok())
        .ok_or_else(|| SignedEvalError::ExponentTooLarge(exp.clone()))?;
    Ok(num_traits::pow(base, e))
}

/// Evaluates `expr` under `env`.
pub fn eval_signed(expr: &SignedExpr, env: &Env) -> Result<SignedValue, SignedEvalError> {
    expr.eval(env).map(SignedValue::from)
}

impl From<&Term> for SignedExpr {
    fn from(t: &Term) -> Self {
        let b = |x: &Term| Box::new(SignedExpr::from(x));
        match t {
            Term::Const(c) => SignedExpr::Const(c.clone()),
            Term::Var(v) => SignedExpr::Var(v.clone()),
            Term::Add(l, r) => SignedExpr::Add(b(l), b(r)),
            Term::TruncSub(l, r) => SignedExpr::TruncSub(b(l), b(r)),
            Term::Mul(l, r) => SignedExpr::Mul(b(l), b(r)),
            Term::FloorDiv(l, r) => SignedExpr::FloorDiv(b(l), b(r)),
            Term::Mod(l, r) => SignedExpr::Mod(b(l), b(r)),
            Term::Pow(l, r) => SignedExpr::Pow(b(l), b(r)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: u64) -> SignedExpr {
        SignedExpr::constant(v)
    }

    fn ev(e: &SignedExpr) -> BigInt {
        e.eval(&Env::new()).unwrap()
    }

    #[test]
    fn floor_division_rounds_down() {
        let e = (k(0) - k(83520)).floor_div(k(983040));
        assert_eq!(ev(&e), BigInt::from(-1));
        let e = (k(0) - k(7)).floor_div(k(2));
        assert_eq!(ev(&e), BigInt::from(-4));
    }

    #[test]
    fn euclidean_remainder() {
        assert_eq!(ev(&((k(0) - k(1)) % k(16))), BigInt::from(15));
        assert_eq!(ev(&((k(0) - k(1)) % (k(0) - k(16)))), BigInt::from(15));
        assert_eq!(ev(&(k(33) % k(16))), BigInt::from(1));
    }

    #[test]
    fn zero_divisor_is_an_error() {
        assert_eq!(
            k(5).floor_div(k(0)).eval(&Env::new()),
            Err(SignedEvalError::DivisionByZero)
        );
        assert_eq!(
            (k(5) % k(0)).eval(&Env::new()),
            Err(SignedEvalError::DivisionByZero)
        );
    }

    #[test]
    fn negative_bases() {
        let minus_two = k(0) - k(2);
        assert_eq!(ev(&minus_two.clone().pow(k(3))), BigInt::from(-8));
        assert_eq!(ev(&minus_two.pow(k(0))), BigInt::from(1));
        let minus_one = k(0) - k(1);
        assert_eq!(ev(&minus_one.clone().pow(k(1 << 40))), BigInt::from(1));
        assert_eq!(ev(&minus_one.pow(k((1 << 40) + 1))), BigInt::from(-1));
    }

    #[test]
    fn negative_exponent_is_an_error() {
        let e = k(2).pow(k(0) - k(1));
        assert!(matches!(
            e.eval(&Env::new()),
            Err(SignedEvalError::NegativeExponent(_))
        ));
    }

    #[test]
    fn signed_value_normalizes_sign() {
        let z = SignedValue::new(Sign::Minus, Natural::from(0u8));
        assert_eq!(z.sign(), Sign::NoSign);
        assert_eq!(z.signum(), 0);
        let v = SignedValue::from(BigInt::from(-12));
        assert_eq!(v.signum(), -1);
        assert_eq!(v.magnitude(), &Natural::from(12u8));
        assert_eq!(v.to_natural(), None);
        assert_eq!(v.to_string(), "-12");
    }

    #[test]
    fn truncated_subtraction_embeds() {
        assert_eq!(ev(&k(3).monus(k(5))), BigInt::from(0));
        assert_eq!(ev(&(k(3) - k(5))), BigInt::from(-2));
    }
}
