#![allow(dead_code)]

use arith_terms::term::BinOp;
use arith_terms::{Env, Natural, Term};
use proptest::prelude::*;
use rand::Rng;

pub const VARS: [&str; 4] = ["m", "n", "k", "x_1"];

/// Random term of at most `depth` levels. With `tame`, every exponent is a
/// constant below 7 so closed terms stay small enough to evaluate.
pub fn random_term(rng: &mut impl Rng, depth: u32, tame: bool, with_vars: bool) -> Term {
    if depth <= 1 || rng.gen_bool(0.25) {
        return random_leaf(rng, with_vars);
    }
    let op = BinOp::ALL[rng.gen_range(0..BinOp::ALL.len())];
    let lhs = random_term(rng, depth - 1, tame, with_vars);
    let rhs = if op == BinOp::Pow && tame {
        Term::Const(Natural::from(rng.gen_range(0u32..7)))
    } else {
        random_term(rng, depth - 1, tame, with_vars)
    };
    Term::binary(op, lhs, rhs)
}

fn random_leaf(rng: &mut impl Rng, with_vars: bool) -> Term {
    if with_vars && rng.gen_bool(0.3) {
        Term::var(VARS[rng.gen_range(0..VARS.len())])
    } else if rng.gen_bool(0.1) {
        // occasionally something past u64
        Term::Const(Natural::from(rng.gen::<u64>()) << 70u32)
    } else {
        Term::Const(Natural::from(rng.gen_range(0u32..20)))
    }
}

pub fn arb_leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0u64..1000).prop_map(|v| Term::Const(Natural::from(v))),
        any::<u128>().prop_map(|v| Term::Const(Natural::from(v))),
        proptest::sample::select(VARS.to_vec()).prop_map(Term::var),
    ]
}

pub fn arb_op() -> impl Strategy<Value = BinOp> {
    proptest::sample::select(BinOp::ALL.to_vec())
}

/// Arbitrary terms, variables included.
pub fn arb_term() -> impl Strategy<Value = Term> {
    arb_leaf().prop_recursive(6, 64, 2, |inner| {
        (arb_op(), inner.clone(), inner).prop_map(|(op, l, r)| Term::binary(op, l, r))
    })
}

/// Closed terms whose exponents are small constants.
pub fn arb_tame_closed_term() -> impl Strategy<Value = Term> {
    let leaf = (0u64..50).prop_map(|v| Term::Const(Natural::from(v)));
    leaf.prop_recursive(5, 32, 2, |inner| {
        (arb_op(), inner.clone(), inner, 0u32..7).prop_map(|(op, l, r, e)| {
            if op == BinOp::Pow {
                Term::binary(op, l, Term::Const(Natural::from(e)))
            } else {
                Term::binary(op, l, r)
            }
        })
    })
}

pub fn corpus_env() -> Env {
    Env::new()
        .with("m", 3u32)
        .with("n", 5u32)
        .with("k", 2u32)
        .with("j", 1u32)
        .with("s", 3u32)
        .with("r", 3u32)
        .with("x", 7u32)
        .with("y", 0u32)
}

/// Hand-written sources, all closed under [`corpus_env`].
pub const CORPUS: &[&str] = &[
    "0",
    "42",
    "x",
    "1 + 2",
    "2 + 3 * 4",
    "(2 + 3) * 4",
    "2 ^ 3 ^ 2",
    "(2 ^ 3) ^ 2",
    "0 ^ 0",
    "0^5",
    "5 / 0",
    "7 % 0",
    "7 % 1",
    "3 -. 5",
    "5 -. 3",
    "10 -. 3 -. 2",
    "10 -. (3 -. 2)",
    "100 / 7 / 2",
    "100 / (7 / 2)",
    "100 % 7 % 3",
    "100 % (7 % 3)",
    "2*3%4",
    "2*(3%4)",
    "x % y",
    "x / y",
    "y ^ y",
    "x^y",
    "m*n",
    "m + n * k",
    "(m + n) * k",
    "m ^ k ^ j",
    "(m ^ k) ^ j",
    "2^(m+n+4) / (2^(m+n+4) / (n+1) / (m+1)) -. (m+n+1)",
    "(2^n+1)^n / 2^(n*k) % 2^n",
    "(2^n+1)^n / 2^(n*(n -. j)) % (2^n -. 1)",
    "((2^n+1)^n % (2^(n*s) -. 1)) / 2^(n*j) % 2^n",
    "(r^(r*n) -. 1)^n / (r^(n+k) -. r^k)^n % r^n",
    "((r^(r*n) -. 1) / (r^n -. 1))^n % r^(n*(j+1)) % (r^n -. 1)",
    "(27^n -. 1)^n / (9^n -. 3^n)^n % 3^n",
    "((((1))))",
    "  1+\t2 * ( 3 ) ",
    "123456789012345678901234567890 * 98765432109876543210",
    "123456789012345678901234567890 % 1000000007",
    "2^200 / 3^100",
    "2^128 -. 1",
    "x * x * x -. x ^ 3",
    "x^2 + 2*x*m + m^2 -. (x+m)^2",
    "(x + m) % (n -. n)",
    "n -. m -. k -. j",
    "n * (m -. k) / (j + 1) % (x + 1)",
    "1 + 1 + 1 + 1 + 1 + 1 + 1 + 1",
    "2 ^ 2 ^ 2 ^ 2",
    "k_free_name_is_not_used + 0",
];

pub fn corpus_env_with_extras() -> Env {
    corpus_env().with("k_free_name_is_not_used", 9u32)
}
