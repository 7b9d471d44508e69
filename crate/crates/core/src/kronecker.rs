//! Kronecker substitution: a polynomial with coefficients below `base` is
//! stored as the single integer `f(base)`, and coefficients come back out as
//! base-`base` digits. Multiplying two packed polynomials is then one big
//! integer product, provided the base exceeds every product coefficient.

use std::time::Instant;

use num_bigint::RandBigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::oracles::convolve;
use crate::poly::Polynomial;
use crate::Natural;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KroneckerError {
    #[error("base {0} is below 2")]
    BaseTooSmall(Natural),
    #[error("coefficient at index {index} ({value}) is not below the base {base}")]
    CoefficientOverflow {
        index: usize,
        value: Natural,
        base: Natural,
    },
}

/// A polynomial packed as `f(base)`. The coefficient count travels with the
/// value since trailing zeros (and the zero polynomial) leave no digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedPoly {
    value: Natural,
    base: Natural,
    length: usize,
}

impl PackedPoly {
    /// Wraps an already-packed integer.
    pub fn from_parts(
        value: Natural,
        base: Natural,
        length: usize,
    ) -> Result<Self, KroneckerError> {
        if base < Natural::from(2u8) {
            return Err(KroneckerError::BaseTooSmall(base));
        }
        Ok(PackedPoly {
            value,
            base,
            length,
        })
    }

    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn base(&self) -> &Natural {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }
}

/// `log2(base)` when the base is a power of two.
fn power_of_two_exponent(base: &Natural) -> Option<u64> {
    let tz = base.trailing_zeros()?;
    (base.bits() == tz + 1).then_some(tz)
}

pub fn pack(p: &Polynomial, base: &Natural) -> Result<PackedPoly, KroneckerError> {
    if *base < Natural::from(2u8) {
        return Err(KroneckerError::BaseTooSmall(base.clone()));
    }
    if let Some(index) = p.coeffs().iter().position(|c| c >= base) {
        return Err(KroneckerError::CoefficientOverflow {
            index,
            value: p.coeffs()[index].clone(),
            base: base.clone(),
        });
    }
    let value = match power_of_two_exponent(base) {
        Some(width) => pack_bits(p.coeffs(), width),
        None => p.eval_at(base),
    };
    Ok(PackedPoly {
        value,
        base: base.clone(),
        length: p.len(),
    })
}

pub fn unpack(pp: &PackedPoly) -> Polynomial {
    if let Some(width) = power_of_two_exponent(&pp.base) {
        return Polynomial::new(unpack_bits(&pp.value, width, pp.length));
    }
    let mut rest = pp.value.clone();
    let mut coeffs = Vec::with_capacity(pp.length);
    for _ in 0..pp.length {
        let digit = &rest % &pp.base;
        rest /= &pp.base;
        coeffs.push(digit);
    }
    Polynomial::new(coeffs)
}

/// Lays each coefficient into its own `width`-bit field.
fn pack_bits(coeffs: &[Natural], width: u64) -> Natural {
    let total = coeffs.len() as u64 * width;
    let mut limbs = vec![0u32; total.div_ceil(32) as usize + 1];
    for (i, c) in coeffs.iter().enumerate() {
        let offset = i as u64 * width;
        let word = (offset / 32) as usize;
        let shift = offset % 32;
        for (d, digit) in c.iter_u32_digits().enumerate() {
            limbs[word + d] |= digit << shift;
            if shift != 0 {
                let hi = digit >> (32 - shift);
                if hi != 0 {
                    limbs[word + d + 1] |= hi;
                }
            }
        }
    }
    Natural::new(limbs)
}

fn unpack_bits(value: &Natural, width: u64, length: usize) -> Vec<Natural> {
    let digits = value.to_u32_digits();
    let digit = |i: usize| digits.get(i).copied().unwrap_or(0);
    let field_words = width.div_ceil(32) as usize;
    let tail_bits = width % 32;
    (0..length)
        .map(|i| {
            let offset = i as u64 * width;
            let word = (offset / 32) as usize;
            let shift = offset % 32;
            let mut field: Vec<u32> = (0..field_words)
                .map(|t| {
                    let lo = digit(word + t) >> shift;
                    if shift == 0 {
                        lo
                    } else {
                        lo | (digit(word + t + 1) << (32 - shift))
                    }
                })
                .collect();
            if tail_bits != 0 {
                if let Some(last) = field.last_mut() {
                    *last &= (1u32 << tail_bits) - 1;
                }
            }
            Natural::new(field)
        })
        .collect()
}

/// Exponent of the smallest power of two exceeding
/// `max_coeff(p) · max_coeff(q) · min(len p, len q)`, at least 1.
pub fn product_base_bits(p: &Polynomial, q: &Polynomial) -> u64 {
    let bound = p.max_coeff() * q.max_coeff() * Natural::from(p.len().min(q.len()));
    bound.bits().max(1)
}

/// The product `p · q` through one big-integer multiplication.
///
/// The result has `len p + len q − 1` coefficients, matching
/// [`convolve`]; the product with an empty polynomial is empty.
pub fn kron_multiply(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_empty() || q.is_empty() {
        return Polynomial::zero();
    }
    let width = product_base_bits(p, q);
    let a = pack_bits(p.coeffs(), width);
    let b = pack_bits(q.coeffs(), width);
    Polynomial::new(unpack_bits(&(a * b), width, p.len() + q.len() - 1))
}

/// Timing comparison of schoolbook convolution against [`kron_multiply`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub degree: usize,
    pub coeff_bits: u64,
    pub trials: usize,
    /// Field width of the packed product, i.e. `log2` of the chosen base.
    pub base_bits: u64,
    /// Bit length of the packed product integer.
    pub total_bits: u64,
    pub naive_ns: u64,
    pub kron_ns: u64,
    pub speedup: f64,
    pub products_equal: bool,
}

pub fn random_polynomial(rng: &mut impl Rng, len: usize, coeff_bits: u64) -> Polynomial {
    Polynomial::new(
        (0..len)
            .map(|_| {
                if coeff_bits == 0 {
                    Natural::zero()
                } else {
                    rng.gen_biguint(coeff_bits)
                }
            })
            .collect(),
    )
}

/// Multiplies `trials` random pairs of degree-`degree` polynomials with
/// coefficients below `2^coeff_bits` both ways, sequentially.
pub fn bench_multiply(degree: usize, coeff_bits: u64, trials: usize, seed: u64) -> BenchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut naive_ns = 0u128;
    let mut kron_ns = 0u128;
    let mut products_equal = true;
    let mut base_bits = 0;
    let mut total_bits = 0;
    for _ in 0..trials {
        let p = random_polynomial(&mut rng, degree + 1, coeff_bits);
        let q = random_polynomial(&mut rng, degree + 1, coeff_bits);

        let start = Instant::now();
        let naive = convolve(&p, &q);
        naive_ns += start.elapsed().as_nanos();

        let start = Instant::now();
        let packed = kron_multiply(&p, &q);
        kron_ns += start.elapsed().as_nanos();

        base_bits = base_bits.max(product_base_bits(&p, &q));
        total_bits = total_bits.max(base_bits * (2 * degree as u64 + 1));
        products_equal &= naive == packed;
    }
    let naive_ns = u64::try_from(naive_ns).unwrap_or(u64::MAX);
    let kron_ns = u64::try_from(kron_ns).unwrap_or(u64::MAX);
    BenchReport {
        degree,
        coeff_bits,
        trials,
        base_bits,
        total_bits,
        naive_ns,
        kron_ns,
        speedup: if kron_ns == 0 {
            0.0
        } else {
            naive_ns as f64 / kron_ns as f64
        },
        products_equal,
    }
}

impl BenchReport {
    /// One `key=value` line per field.
    pub fn to_key_values(&self) -> String {
        format!(
            "degree={}\ncoeff_bits={}\ntrials={}\nbase_bits={}\ntotal_bits={}\nnaive_ns={}\nkron_ns={}\nspeedup={:.3}\nproducts_equal={}\n",
            self.degree,
            self.coeff_bits,
            self.trials,
            self.base_bits,
            self.total_bits,
            self.naive_ns,
            self.kron_ns,
            self.speedup,
            self.products_equal
        )
    }
}

/// `f(1)`, which works as a packing base for any polynomial with at least two
/// nonzero coefficients.
pub fn coefficient_sum_base(p: &Polynomial) -> Natural {
    p.coeff_sum()
}
