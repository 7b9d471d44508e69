//! The natural-number scalar that terms, oracles and polynomials are generic over.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, ToPrimitive, Unsigned};

/// A non-negative integer type usable as the value domain of arithmetic terms.
///
/// `BigUint` is the exact, unbounded instance. The fixed-width instances
/// (`u32`, `u64`, `u128`) are handy for quick evaluation of small terms; with
/// them every operation that would leave the type is reported as an overflow
/// rather than wrapped.
pub trait Nat:
    Clone
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + Unsigned
    + Integer
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// Number of significant bits; zero for zero.
    fn bit_len(&self) -> u64;

    /// `true` when the type can represent every natural number.
    const UNBOUNDED: bool;

    /// `max(self - rhs, 0)`.
    fn monus(&self, rhs: &Self) -> Self {
        if self > rhs {
            self.clone() - rhs.clone()
        } else {
            Self::zero()
        }
    }
}

impl Nat for BigUint {
    const UNBOUNDED: bool = true;

    fn bit_len(&self) -> u64 {
        self.bits()
    }
}

macro_rules! impl_nat_prim {
    ($($t:ty),*) => {$(
        impl Nat for $t {
            const UNBOUNDED: bool = false;

            fn bit_len(&self) -> u64 {
                u64::from(<$t>::BITS - self.leading_zeros())
            }
        }
    )*};
}

impl_nat_prim!(u8, u16, u32, u64, u128, usize);
