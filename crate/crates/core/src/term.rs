//! Arithmetic terms and their exact evaluation over the naturals.
//!
//! A term is built from natural constants and variables with six binary
//! operations: addition, truncated subtraction, multiplication, floored
//! division, remainder and exponentiation. Evaluation is total on closed
//! terms thanks to the conventions
//!
//! * `0^0 = 1`
//! * `⌊x / 0⌋ = 0`
//! * `a mod b = a ∸ b·⌊a/b⌋`, hence `m mod 0 = m` and `m mod 1 = 0`
//!
//! The only failures are unbound variables, exponents too large to attempt
//! and, for fixed-width scalars, overflow.

use std::collections::{BTreeMap, BTreeSet};
use std::ops;

use thiserror::Error;

use crate::scalar::Nat;
use crate::Natural;

/// Upper limit on the size (in bits) of any power the evaluator will attempt.
pub const MAX_POW_BITS: u64 = 1 << 32;

/// The six operations of the term language.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    TruncSub,
    Mul,
    FloorDiv,
    Mod,
    Pow,
}

impl BinOp {
    pub const ALL: [BinOp; 6] = [
        BinOp::Add,
        BinOp::TruncSub,
        BinOp::Mul,
        BinOp::FloorDiv,
        BinOp::Mod,
        BinOp::Pow,
    ];

    /// Concrete syntax of the operator.
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::TruncSub => "-.",
            BinOp::Mul => "*",
            BinOp::FloorDiv => "/",
            BinOp::Mod => "%",
            BinOp::Pow => "^",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::TruncSub => 1,
            BinOp::Mul | BinOp::FloorDiv | BinOp::Mod => 2,
            BinOp::Pow => 3,
        }
    }

    pub fn is_right_assoc(self) -> bool {
        self == BinOp::Pow
    }

    /// Applies the operation under the natural-number conventions.
    pub fn apply<N: Nat>(self, a: &N, b: &N) -> Result<N, EvalError> {
        self.apply_with_limit(a, b, MAX_POW_BITS)
    }

    /// As [`BinOp::apply`], refusing powers of more than `max_pow_bits` bits.
    pub fn apply_with_limit<N: Nat>(self, a: &N, b: &N, max_pow_bits: u64) -> Result<N, EvalError> {
        match self {
            BinOp::Add => a.checked_add(b).ok_or(EvalError::Overflow(self)),
            BinOp::TruncSub => Ok(a.monus(b)),
            BinOp::Mul => a.checked_mul(b).ok_or(EvalError::Overflow(self)),
            BinOp::FloorDiv => Ok(floor_div(a, b)),
            BinOp::Mod => Ok(modulo(a, b)),
            BinOp::Pow => pow_with_limit(a, b, max_pow_bits),
        }
    }
}

/// `⌊a/b⌋`, with `⌊a/0⌋ = 0`.
pub fn floor_div<N: Nat>(a: &N, b: &N) -> N {
    if b.is_zero() {
        N::zero()
    } else {
        a.div_floor(b)
    }
}

/// `a ∸ b·⌊a/b⌋`.
pub fn modulo<N: Nat>(a: &N, b: &N) -> N {
    // b·⌊a/b⌋ ≤ a, so the product never overflows a fixed-width scalar.
    let multiple = b.clone() * floor_div(a, b);
    a.monus(&multiple)
}

/// `a^b` with `0^0 = 1`.
pub fn pow<N: Nat>(base: &N, exp: &N) -> Result<N, EvalError> {
    pow_with_limit(base, exp, MAX_POW_BITS)
}

pub fn pow_with_limit<N: Nat>(base: &N, exp: &N, max_bits: u64) -> Result<N, EvalError> {
    if exp.is_zero() {
        return Ok(N::one());
    }
    if base.is_zero() || base.is_one() {
        return Ok(base.clone());
    }
    let too_large = || EvalError::ExponentTooLarge {
        base_bits: base.bit_len(),
        exponent: exp.to_string(),
    };
    let e = exp.to_u64().ok_or_else(too_large)?;
    // Lower bound on the bit length of the result.
    let min_bits = (base.bit_len() - 1).saturating_mul(e).saturating_add(1);
    if min_bits > max_bits {
        return Err(too_large());
    }
    let e = usize::try_from(e).map_err(|_| too_large())?;
    num_traits::checked_pow(base.clone(), e).ok_or(EvalError::Overflow(BinOp::Pow))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("exponent {exponent} is too large for a {base_bits}-bit base")]
    ExponentTooLarge { base_bits: u64, exponent: String },
    #[error("`{}` overflows the fixed-width scalar", .0.symbol())]
    Overflow(BinOp),
}

/// An arithmetic term over the scalar `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term<N = Natural> {
    Const(N),
    Var(String),
    Add(Box<Term<N>>, Box<Term<N>>),
    TruncSub(Box<Term<N>>, Box<Term<N>>),
    Mul(Box<Term<N>>, Box<Term<N>>),
    FloorDiv(Box<Term<N>>, Box<Term<N>>),
    Mod(Box<Term<N>>, Box<Term<N>>),
    Pow(Box<Term<N>>, Box<Term<N>>),
}

impl<N> Term<N> {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn binary(op: BinOp, lhs: Term<N>, rhs: Term<N>) -> Self {
        let (l, r) = (Box::new(lhs), Box::new(rhs));
        match op {
            BinOp::Add => Term::Add(l, r),
            BinOp::TruncSub => Term::TruncSub(l, r),
            BinOp::Mul => Term::Mul(l, r),
            BinOp::FloorDiv => Term::FloorDiv(l, r),
            BinOp::Mod => Term::Mod(l, r),
            BinOp::Pow => Term::Pow(l, r),
        }
    }

    /// Splits a binary node into its operator and operands.
    pub fn as_binary(&self) -> Option<(BinOp, &Term<N>, &Term<N>)> {
        let (op, l, r) = match self {
            Term::Const(_) | Term::Var(_) => return None,
            Term::Add(l, r) => (BinOp::Add, l, r),
            Term::TruncSub(l, r) => (BinOp::TruncSub, l, r),
            Term::Mul(l, r) => (BinOp::Mul, l, r),
            Term::FloorDiv(l, r) => (BinOp::FloorDiv, l, r),
            Term::Mod(l, r) => (BinOp::Mod, l, r),
            Term::Pow(l, r) => (BinOp::Pow, l, r),
        };
        Some((op, l, r))
    }

    /// `self ∸ rhs`.
    pub fn monus(self, rhs: impl Into<Term<N>>) -> Self {
        Term::binary(BinOp::TruncSub, self, rhs.into())
    }

    pub fn pow(self, exp: impl Into<Term<N>>) -> Self {
        Term::binary(BinOp::Pow, self, exp.into())
    }

    /// Node count.
    pub fn size(&self) -> u64 {
        match self.as_binary() {
            None => 1,
            Some((_, l, r)) => 1 + l.size() + r.size(),
        }
    }

    /// Height of the tree; a leaf has depth 1.
    pub fn depth(&self) -> u64 {
        match self.as_binary() {
            None => 1,
            Some((_, l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(name) => {
                out.insert(name);
            }
            Term::Const(_) => {}
            _ => {
                let (_, l, r) = self.as_binary().expect("binary node");
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Rebuilds the term over another scalar, converting every constant.
    pub fn try_map_consts<M, E>(&self, f: &impl Fn(&N) -> Result<M, E>) -> Result<Term<M>, E> {
        Ok(match self {
            Term::Const(c) => Term::Const(f(c)?),
            Term::Var(v) => Term::Var(v.clone()),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                Term::binary(op, l.try_map_consts(f)?, r.try_map_consts(f)?)
            }
        })
    }
}

impl<N: Nat> Term<N> {
    pub fn constant(value: impl Into<N>) -> Self {
        Term::Const(value.into())
    }

    /// Evaluates bottom-up under `env`.
    pub fn eval(&self, env: &Env<N>) -> Result<N, EvalError> {
        self.eval_with_limit(env, MAX_POW_BITS)
    }

    /// Evaluates with a tighter cap on the size of powers.
    pub fn eval_with_limit(&self, env: &Env<N>, max_pow_bits: u64) -> Result<N, EvalError> {
        match self {
            Term::Const(c) => Ok(c.clone()),
            Term::Var(name) => env
                .get(name)
                .cloned()
                .ok_or_else(|| EvalError::UnboundVariable(name.clone())),
            _ => {
                let (op, l, r) = self.as_binary().expect("binary node");
                let a = l.eval_with_limit(env, max_pow_bits)?;
                let b = r.eval_with_limit(env, max_pow_bits)?;
                op.apply_with_limit(&a, &b, max_pow_bits)
            }
        }
    }
}

/// Evaluates `t` under `env`.
pub fn eval<N: Nat>(t: &Term<N>, env: &Env<N>) -> Result<N, EvalError> {
    t.eval(env)
}

pub fn term_size<N>(t: &Term<N>) -> u64 {
    t.size()
}

pub fn term_depth<N>(t: &Term<N>) -> u64 {
    t.depth()
}

impl From<u32> for Term<Natural> {
    fn from(v: u32) -> Self {
        Term::Const(Natural::from(v))
    }
}

impl From<u64> for Term<u64> {
    fn from(v: u64) -> Self {
        Term::Const(v)
    }
}

impl From<&str> for Term<Natural> {
    fn from(name: &str) -> Self {
        Term::var(name)
    }
}

macro_rules! term_op {
    ($trait:ident, $method:ident, $op:expr) => {
        impl<N, R: Into<Term<N>>> ops::$trait<R> for Term<N> {
            type Output = Term<N>;

            fn $method(self, rhs: R) -> Term<N> {
                Term::binary($op, self, rhs.into())
            }
        }
    };
}

term_op!(Add, add, BinOp::Add);
term_op!(Mul, mul, BinOp::Mul);
// Division is floored and the remainder follows the term conventions.
term_op!(Div, div, BinOp::FloorDiv);
term_op!(Rem, rem, BinOp::Mod);

/// Variable bindings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Env<N = Natural> {
    bindings: BTreeMap<String, N>,
}

impl<N> Default for Env<N> {
    fn default() -> Self {
        Env {
            bindings: BTreeMap::new(),
        }
    }
}

impl<N> Env<N> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: impl Into<N>) -> &mut Self {
        self.bindings.insert(name.into(), value.into());
        self
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<N>) -> Self {
        self.bind(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&N> {
        self.bindings.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &N)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }
}

impl<N, K: Into<String>> FromIterator<(K, N)> for Env<N> {
    fn from_iter<I: IntoIterator<Item = (K, N)>>(iter: I) -> Self {
        Env {
            bindings: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}
