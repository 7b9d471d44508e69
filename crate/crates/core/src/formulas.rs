//! Closed-form coefficient formulas.
//!
//! Each formula comes twice: a direct evaluator working on big integers
//! (shifts and masks where the base is a power of two), and a builder for the
//! literal arithmetic term over the parameter variables. Both enforce the
//! exact parameter domain under which the identity is proved; outside it the
//! identities can fail (e.g. the mod `2^n − 1` partial-sum formula at
//! `j = n − 1`), so out-of-domain calls are errors.
//!
//! The one exception to "is an arithmetic term" is the partial-sum formula
//! with a negative numerator ([`partial_sum_boardman`]); it is built as a
//! [`SignedExpr`] and evaluated with signed floor semantics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::Polynomial;
use crate::signed::{eval_signed, SignedExpr};
use crate::term::{Env, Term, MAX_POW_BITS};
use crate::Natural;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{formula}: parameters outside the domain {condition} (got {got})")]
    Domain {
        formula: &'static str,
        condition: &'static str,
        got: String,
    },
    #[error("{formula}: intermediate values would need about {bits} bits")]
    TooLarge { formula: &'static str, bits: u64 },
    #[error("{0} is not an arithmetic term; no term is available")]
    NoTerm(&'static str),
    #[error("unknown formula `{0}`")]
    UnknownFormula(String),
    #[error("{formula}: missing parameter `{param}`")]
    MissingParam {
        formula: &'static str,
        param: &'static str,
    },
}

fn require(
    ok: bool,
    formula: &'static str,
    condition: &'static str,
    got: impl FnOnce() -> String,
) -> Result<(), FormulaError> {
    if ok {
        Ok(())
    } else {
        Err(FormulaError::Domain {
            formula,
            condition,
            got: got(),
        })
    }
}

/// Rejects evaluations whose intermediates exceed the evaluator's power limit.
/// `factors` multiply to an estimate of the largest intermediate, in bits.
fn bounded(formula: &'static str, factors: &[u64]) -> Result<(), FormulaError> {
    let bits = factors
        .iter()
        .try_fold(1u64, |acc, &f| acc.checked_mul(f))
        .unwrap_or(u64::MAX);
    if bits > MAX_POW_BITS {
        Err(FormulaError::TooLarge { formula, bits })
    } else {
        Ok(())
    }
}

fn pow2(e: u64) -> Natural {
    Natural::one() << e
}

fn low_bits(v: Natural, bits: u64) -> Natural {
    v & (pow2(bits) - 1u32)
}

fn npow(base: u64, e: u64) -> Natural {
    num_traits::pow(Natural::from(base), e as usize)
}

/// `(2^n + 1)^n`, the packed form of row `n` of Pascal's triangle in base `2^n`.
fn packed_pascal_row(n: u64) -> Natural {
    num_traits::pow(pow2(n) + 1u32, n as usize)
}

/// `[x^k] f(x)` as `⌊f(c) / c^k⌋ mod c`.
///
/// Requires `k ≤ deg f` and every coefficient of index `≤ k` to be below `c`.
pub fn digit_extract(f: &Polynomial, k: usize, c: &Natural) -> Result<Natural, FormulaError> {
    const NAME: &str = "digit_extract";
    let deg = f.degree();
    require(
        deg.is_some_and(|d| k <= d),
        NAME,
        "0 ≤ k ≤ deg f",
        || {
            format!(
                "k={k}, deg f={}",
                deg.map_or("-∞".into(), |d| d.to_string())
            )
        },
    )?;
    if let Some(i) = f.coeffs()[..=k].iter().position(|a| a >= c) {
        return Err(FormulaError::Domain {
            formula: NAME,
            condition: "[x^i]f < c for every i ≤ k",
            got: format!("[x^{i}]f = {} ≥ c = {c}", f.coeffs()[i]),
        });
    }
    bounded(NAME, &[c.bits().max(1), f.len() as u64])?;
    let value = f.eval_at(c);
    let shifted = if c.is_zero() {
        // unreachable: every coefficient would have to be below zero
        Natural::zero()
    } else {
        value / num_traits::pow(c.clone(), k)
    };
    Ok(shifted % c)
}

pub fn digit_extract_term(f: &Polynomial) -> Term {
    let c = || Term::var("c");
    let value = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| match i {
            0 => Term::Const(a.clone()),
            1 => Term::Const(a.clone()) * c(),
            _ => Term::Const(a.clone()) * c().pow(Term::from(i as u32)),
        })
        .reduce(|acc, t| acc + t)
        .unwrap_or_else(|| Term::from(0u32));
    value / c().pow("k") % c()
}

/// `C(n, k) = ⌊(2^n + 1)^n / 2^(nk)⌋ mod 2^n` for `n ≥ 1`, `0 ≤ k ≤ n`.
pub fn binomial(n: u64, k: u64) -> Result<Natural, FormulaError> {
    binomial_domain(n, k)?;
    bounded("binomial", &[n, n + 1])?;
    Ok(low_bits(packed_pascal_row(n) >> (n * k), n))
}

pub fn binomial_domain(n: u64, k: u64) -> Result<(), FormulaError> {
    require(
        n >= 1 && k <= n,
        "binomial",
        "n ≥ 1, 0 ≤ k ≤ n",
        || format!("n={n}, k={k}"),
    )
}

pub fn binomial_term() -> Term {
    let n = || Term::var("n");
    let two = || Term::from(2u32);
    (two().pow(n()) + 1u32).pow(n()) / two().pow(n() * "k") % two().pow(n())
}

/// `Σ_{k=0..j} C(n, k) = ⌊(2^n + 1)^n / 2^(n(n−j))⌋ mod (2^n − 1)` for
/// `0 ≤ j ≤ n − 2`.
pub fn partial_sum(n: u64, j: u64) -> Result<Natural, FormulaError> {
    partial_sum_domain(n, j)?;
    bounded("partial_sum", &[n, n + 1])?;
    Ok((packed_pascal_row(n) >> (n * (n - j))) % (pow2(n) - 1u32))
}

pub fn partial_sum_domain(n: u64, j: u64) -> Result<(), FormulaError> {
    require(
        n >= 2 && j <= n - 2,
        "partial_sum",
        "0 ≤ j ≤ n−2",
        || format!("n={n}, j={j}"),
    )
}

pub fn partial_sum_term() -> Term {
    let n = || Term::var("n");
    let two = || Term::from(2u32);
    (two().pow(n()) + 1u32).pow(n()) / two().pow(n() * n().monus("j")) % two().pow(n()).monus(1u32)
}

/// `1 + (⌊(1 − (2^n + 1)^n) / ((2^n − 1)·2^(nj))⌋ mod 2^n)` as a signed
/// expression over `n` and `j`.
pub fn boardman_expr() -> SignedExpr {
    let n = || SignedExpr::var("n");
    let two = || SignedExpr::constant(2u32);
    let one = || SignedExpr::constant(1u32);
    let numerator = one() - (two().pow(n()) + one()).pow(n());
    let denominator = (two().pow(n()) - one()) * two().pow(n() * SignedExpr::var("j"));
    one() + numerator.floor_div(denominator) % two().pow(n())
}

/// `Σ_{k=0..j} C(n, k)` for `1 ≤ j ≤ n`, through [`boardman_expr`] and signed
/// evaluation. Covers `j ∈ {n−1, n}`, which [`partial_sum`] excludes.
pub fn partial_sum_boardman(n: u64, j: u64) -> Result<Natural, FormulaError> {
    partial_sum_boardman_domain(n, j)?;
    bounded("partial_sum_boardman", &[n, n + 1])?;
    let env = Env::new().with("n", n).with("j", j);
    let value = eval_signed(&boardman_expr(), &env).expect("denominator is nonzero for n ≥ 1");
    Ok(value
        .to_natural()
        .expect("1 + a Euclidean remainder is positive"))
}

/// Same value as [`partial_sum_boardman`], computed natively on `BigInt`.
pub fn partial_sum_boardman_native(n: u64, j: u64) -> Result<Natural, FormulaError> {
    partial_sum_boardman_domain(n, j)?;
    bounded("partial_sum_boardman", &[n, n + 1])?;
    let numerator = BigInt::one() - BigInt::from(packed_pascal_row(n));
    let denominator = BigInt::from((pow2(n) - 1u32) << (n * j));
    let q = numerator.div_floor(&denominator);
    let r = q.mod_floor(&BigInt::from(pow2(n)));
    Ok(Natural::one() + r.to_biguint().expect("mod_floor by a positive modulus"))
}

pub fn partial_sum_boardman_domain(n: u64, j: u64) -> Result<(), FormulaError> {
    require(
        n >= 1 && (1..=n).contains(&j),
        "partial_sum_boardman",
        "n ≥ 1, 1 ≤ j ≤ n",
        || format!("n={n}, j={j}"),
    )
}

/// `Σ_v C(n, vs + j) = ⌊((2^n + 1)^n mod (2^(ns) − 1)) / 2^(nj)⌋ mod 2^n`
/// for `n ≥ 1`, `s ≥ 2`, `0 ≤ j < s`, `(s − 1)n ≥ 2`.
pub fn multisection(n: u64, s: u64, j: u64) -> Result<Natural, FormulaError> {
    multisection_domain(n, s, j)?;
    bounded("multisection", &[n, (n + 1).max(s)])?;
    let reduced = packed_pascal_row(n) % (pow2(n * s) - 1u32);
    Ok(low_bits(reduced >> (n * j), n))
}

pub fn multisection_domain(n: u64, s: u64, j: u64) -> Result<(), FormulaError> {
    const NAME: &str = "multisection";
    let got = || format!("n={n}, s={s}, j={j}");
    require(n >= 1, NAME, "n ≥ 1", got)?;
    require(s >= 2, NAME, "s ≥ 2", got)?;
    require(j < s, NAME, "0 ≤ j < s", got)?;
    require((s - 1).saturating_mul(n) >= 2, NAME, "(s−1)·n ≥ 2", got)
}

pub fn multisection_term() -> Term {
    let n = || Term::var("n");
    let two = || Term::from(2u32);
    ((two().pow(n()) + 1u32).pow(n()) % two().pow(n() * "s").monus(1u32)) / two().pow(n() * "j")
        % two().pow(n())
}

/// `[x^k](1 + … + x^(r−1))^n = ⌊((r^(rn) − 1) / (r^(n+k) − r^k))^n⌋ mod r^n`
/// for `n ≥ 1`, `r ≥ 2`, `0 ≤ k ≤ n(r − 1)`.
///
/// The rational base is raised as `⌊A^n / B^n⌋`, which has the same floor.
pub fn poly_coefficient(n: u64, r: u64, k: u64) -> Result<Natural, FormulaError> {
    poly_coefficient_domain(n, r, k)?;
    bounded("poly_coefficient", &[n, r, n, bit_width(r)])?;
    let numerator = npow(r, r * n) - 1u32;
    let denominator = npow(r, n + k) - npow(r, k);
    debug_assert!(!denominator.is_zero());
    let modulus = npow(r, n);
    let q = num_traits::pow(numerator, n as usize) / num_traits::pow(denominator, n as usize);
    Ok(q % modulus)
}

fn bit_width(v: u64) -> u64 {
    u64::from(u64::BITS - v.leading_zeros())
}

pub fn poly_coefficient_domain(n: u64, r: u64, k: u64) -> Result<(), FormulaError> {
    require(
        n >= 1 && r >= 2 && k <= n.saturating_mul(r - 1),
        "poly_coefficient",
        "n ≥ 1, r ≥ 2, 0 ≤ k ≤ n(r−1)",
        || format!("n={n}, r={r}, k={k}"),
    )
}

pub fn poly_coefficient_term() -> Term {
    let (n, r, k) = (|| Term::var("n"), || Term::var("r"), || Term::var("k"));
    let numerator = r().pow(r() * n()).monus(1u32);
    let denominator = r().pow(n() + k()).monus(r().pow(k()));
    numerator.pow(n()) / denominator.pow(n()) % r().pow(n())
}

/// `Σ_{k=0..j} [x^k](1 + … + x^(r−1))^n
///  = (((r^(rn) − 1)/(r^n − 1))^n mod r^(n(j+1))) mod (r^n − 1)`
/// for `n ≥ 1`, `r ≥ 2`, `0 ≤ j ≤ n(r − 1) − 2`.
pub fn poly_partial_sum(n: u64, r: u64, j: u64) -> Result<Natural, FormulaError> {
    poly_partial_sum_domain(n, r, j)?;
    bounded("poly_partial_sum", &[n, r, n, bit_width(r)])?;
    let rn = npow(r, n);
    let (base, rem) = (npow(r, r * n) - 1u32).div_rem(&(rn.clone() - 1u32));
    debug_assert!(rem.is_zero());
    let packed = num_traits::pow(base, n as usize);
    Ok((packed % npow(r, n * (j + 1))) % (rn - 1u32))
}

pub fn poly_partial_sum_domain(n: u64, r: u64, j: u64) -> Result<(), FormulaError> {
    let top = n.saturating_mul(r.saturating_sub(1));
    require(
        n >= 1 && r >= 2 && top >= 2 && j <= top - 2,
        "poly_partial_sum",
        "n ≥ 1, r ≥ 2, 0 ≤ j ≤ n(r−1)−2",
        || format!("n={n}, r={r}, j={j}"),
    )
}

pub fn poly_partial_sum_term() -> Term {
    let (n, r) = (|| Term::var("n"), || Term::var("r"));
    let base = r().pow(r() * n()).monus(1u32) / r().pow(n()).monus(1u32);
    base.pow(n()) % r().pow(n() * (Term::var("j") + 1u32)) % r().pow(n()).monus(1u32)
}

/// `[x^n](1 + x + x^2)^n = ⌊((27^n − 1)/(9^n − 3^n))^n⌋ mod 3^n` for `n ≥ 1`.
pub fn central_trinomial(n: u64) -> Result<Natural, FormulaError> {
    central_trinomial_domain(n)?;
    poly_coefficient(n, 3, n).map_err(|e| match e {
        FormulaError::TooLarge { bits, .. } => FormulaError::TooLarge {
            formula: "central_trinomial",
            bits,
        },
        other => other,
    })
}

pub fn central_trinomial_domain(n: u64) -> Result<(), FormulaError> {
    require(n >= 1, "central_trinomial", "n ≥ 1", || format!("n={n}"))
}

pub fn central_trinomial_term() -> Term {
    let n = || Term::var("n");
    let c = |v: u32| Term::from(v);
    c(27).pow(n()).monus(1u32).pow(n()) / c(9).pow(n()).monus(c(3).pow(n())).pow(n())
        % c(3).pow(n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn paper_poly() -> Polynomial {
        Polynomial::from_u64s(&[1, 4, 10, 20, 25, 24, 16])
    }

    fn env(pairs: &[(&str, u64)]) -> Env {
        pairs.iter().map(|&(k, v)| (k, nat(v))).collect()
    }

    #[test]
    fn digit_extract_worked_example() {
        let f = paper_poly();
        assert_eq!(digit_extract(&f, 2, &nat(100)).unwrap(), nat(10));
        let all: Vec<_> = (0..7)
            .map(|k| digit_extract(&f, k, &nat(100)).unwrap())
            .collect();
        assert_eq!(all, f.coeffs());
        let t = digit_extract_term(&f);
        assert_eq!(t.eval(&env(&[("k", 2), ("c", 100)])).unwrap(), nat(10));
    }

    #[test]
    fn digit_extract_domain() {
        let f = paper_poly();
        assert!(digit_extract(&f, 7, &nat(100)).is_err());
        // coefficient 25 at index 4 is too big for base 20; index 2 is still fine
        assert_eq!(digit_extract(&f, 2, &nat(20)).unwrap(), nat(10));
        assert!(matches!(
            digit_extract(&f, 4, &nat(20)),
            Err(FormulaError::Domain { .. })
        ));
        assert!(digit_extract(&Polynomial::zero(), 0, &nat(2)).is_err());
        let pascal4 = Polynomial::from_u64s(&[1, 4, 6, 4, 1]);
        assert_eq!(digit_extract(&pascal4, 2, &nat(16)).unwrap(), nat(6));
        assert_eq!(digit_extract(&pascal4, 0, &nat(2)).unwrap(), nat(1));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2).unwrap(), nat(6));
        assert_eq!(binomial(7, 0).unwrap(), nat(1));
        assert!(binomial(0, 0).is_err());
        assert!(binomial(3, 4).is_err());
        let t = binomial_term();
        assert_eq!(t.eval(&env(&[("n", 4), ("k", 2)])).unwrap(), nat(6));
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(partial_sum(5, 2).unwrap(), nat(16));
        assert_eq!(partial_sum(2, 0).unwrap(), nat(1));
        assert!(partial_sum(5, 4).is_err());
        assert!(partial_sum(5, 5).is_err());
        assert!(partial_sum(1, 0).is_err());
    }

    #[test]
    fn partial_sum_fails_just_outside_its_domain() {
        // Σ_{k<n} C(n,k) = 2^n − 1 ≡ 0 (mod 2^n − 1): the reason j = n−1 is excluded.
        let n = 6u64;
        let raw = (packed_pascal_row(n) >> n) % (pow2(n) - 1u32);
        assert_eq!(raw, nat(0));
        assert_eq!(oracles::sum_binomial::<Natural>(n, n - 1), nat(63));
    }

    #[test]
    fn boardman_examples() {
        assert_eq!(partial_sum_boardman(4, 4).unwrap(), nat(16));
        assert_eq!(partial_sum_boardman(1, 1).unwrap(), nat(2));
        assert!(partial_sum_boardman(4, 0).is_err());
        assert!(partial_sum_boardman(4, 5).is_err());
        for n in 1..=12 {
            for j in 1..=n {
                assert_eq!(
                    partial_sum_boardman(n, j).unwrap(),
                    partial_sum_boardman_native(n, j).unwrap()
                );
            }
        }
    }

    #[test]
    fn multisection_examples() {
        assert_eq!(multisection(4, 2, 0).unwrap(), nat(8));
        assert_eq!(multisection(4, 5, 4).unwrap(), nat(1));
        assert!(matches!(
            multisection(1, 2, 0),
            Err(FormulaError::Domain {
                condition: "(s−1)·n ≥ 2",
                ..
            })
        ));
        assert!(matches!(
            multisection(4, 2, 2),
            Err(FormulaError::Domain {
                condition: "0 ≤ j < s",
                ..
            })
        ));
        assert!(matches!(
            multisection(4, 1, 0),
            Err(FormulaError::Domain {
                condition: "s ≥ 2",
                ..
            })
        ));
    }

    #[test]
    fn multisection_identity_fails_at_excluded_point() {
        // n = 1, s = 2: (2+1)^1 mod 3 = 0, so both sections come out 0
        // although C(1,0) = C(1,1) = 1.
        let reduced = packed_pascal_row(1) % (pow2(2) - 1u32);
        assert_eq!(reduced, nat(0));
    }

    #[test]
    fn poly_coefficient_examples() {
        assert_eq!(poly_coefficient(2, 3, 2).unwrap(), nat(3));
        assert_eq!(poly_coefficient(1, 2, 1).unwrap(), nat(1));
        assert!(poly_coefficient(2, 3, 5).is_err());
        assert!(poly_coefficient(2, 1, 0).is_err());
        assert!(poly_coefficient(0, 3, 0).is_err());
    }

    #[test]
    fn poly_partial_sum_examples() {
        assert_eq!(poly_partial_sum(2, 3, 1).unwrap(), nat(3));
        assert_eq!(poly_partial_sum(2, 2, 0).unwrap(), nat(1));
        assert!(poly_partial_sum(2, 3, 3).is_err());
        assert!(poly_partial_sum(1, 2, 0).is_err());
    }

    #[test]
    fn central_trinomial_examples() {
        assert_eq!(central_trinomial(1).unwrap(), nat(1));
        assert_eq!(central_trinomial(2).unwrap(), nat(3));
        assert!(central_trinomial(0).is_err());
    }

    #[test]
    fn terms_match_direct_evaluation() {
        let e = env(&[("n", 7), ("k", 3), ("j", 2), ("s", 3), ("r", 3)]);
        assert_eq!(binomial_term().eval(&e).unwrap(), binomial(7, 3).unwrap());
        assert_eq!(
            partial_sum_term().eval(&e).unwrap(),
            partial_sum(7, 2).unwrap()
        );
        assert_eq!(
            multisection_term().eval(&e).unwrap(),
            multisection(7, 3, 2).unwrap()
        );
        assert_eq!(
            poly_coefficient_term().eval(&e).unwrap(),
            poly_coefficient(7, 3, 3).unwrap()
        );
        assert_eq!(
            poly_partial_sum_term().eval(&e).unwrap(),
            poly_partial_sum(7, 3, 2).unwrap()
        );
        assert_eq!(
            central_trinomial_term().eval(&e).unwrap(),
            central_trinomial(7).unwrap()
        );
    }

    #[test]
    fn oversized_parameters_are_refused() {
        assert!(matches!(
            binomial(1 << 20, 3),
            Err(FormulaError::TooLarge { .. })
        ));
        assert!(matches!(
            central_trinomial(1 << 20),
            Err(FormulaError::TooLarge {
                formula: "central_trinomial",
                ..
            })
        ));
    }
}
