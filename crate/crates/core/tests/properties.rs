mod common;

use arith_terms::kronecker::{kron_multiply, pack, unpack};
use arith_terms::oracles::convolve;
use arith_terms::term::{floor_div, modulo, EvalError};
use arith_terms::{parse, parse_as, print, Env, Natural, Polynomial, SignedExpr, Term};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use common::*;

fn nat(v: u128) -> Natural {
    Natural::from(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity(t in arb_term()) {
        let text = print(&t);
        prop_assert_eq!(parse(&text).unwrap(), t, "{}", text);
    }

    #[test]
    fn tame_closed_terms_always_evaluate(t in arb_tame_closed_term()) {
        prop_assert!(t.eval(&Env::new()).is_ok(), "{}", t);
    }

    #[test]
    fn closed_terms_fail_only_on_oversized_powers(t in arb_term()) {
        let env = Env::new().with("m", 3u32).with("n", 4u32).with("k", 0u32).with("x_1", 1u32);
        match t.eval_with_limit(&env, 1 << 16) {
            Ok(_) => {}
            Err(EvalError::ExponentTooLarge { .. }) => {}
            Err(e) => prop_assert!(false, "{e} for {t}"),
        }
    }

    #[test]
    fn conventions(m in any::<u128>(), x in any::<u128>()) {
        let (m, x) = (nat(m), nat(x));
        let c = |v: &Natural| Term::Const(v.clone());
        let ev = |t: Term| t.eval(&Env::new()).unwrap();
        prop_assert_eq!(ev(c(&m) % Term::from(0u32)), m.clone());
        prop_assert_eq!(ev(c(&m) % Term::from(1u32)), Natural::zero());
        prop_assert_eq!(ev(c(&x) / Term::from(0u32)), Natural::zero());
        prop_assert_eq!(ev(Term::from(0u32).pow(0u32)), Natural::from(1u8));
        let expected = if m > x { &m - &x } else { Natural::zero() };
        prop_assert_eq!(ev(c(&m).monus(c(&x))), expected);
    }

    #[test]
    fn division_and_remainder_agree(a in any::<u64>(), b in 1u64..) {
        let (q, r) = (floor_div(&a, &b), modulo(&a, &b));
        prop_assert_eq!(a, b * q + r);
        prop_assert!(r < b);
        let (ab, bb) = (Natural::from(a), Natural::from(b));
        prop_assert_eq!(modulo(&ab, &bb), Natural::from(r));
    }

    #[test]
    fn fixed_width_and_big_agree_unless_overflow(t in arb_tame_closed_term()) {
        let small = t.try_map_consts(&|c: &Natural| u64::try_from(c.clone())).unwrap();
        let big = t.eval(&Env::new()).unwrap();
        match small.eval(&Env::new()) {
            Ok(v) => prop_assert_eq!(Natural::from(v), big),
            Err(EvalError::Overflow(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn signed_agrees_on_subtraction_free_terms(t in arb_tame_closed_term()) {
        let expr = SignedExpr::from(&t);
        prop_assert!(!expr.has_subtraction());
        let unsigned = t.eval(&Env::new()).unwrap();
        // Only division by zero is treated differently.
        if let Ok(v) = expr.eval(&Env::new()) {
            prop_assert_eq!(v, BigInt::from(unsigned));
        }
    }

    #[test]
    fn digit_expansion_bound(x in 2u64..1_000_000, digits in prop::collection::vec(any::<u64>(), 1..40)) {
        let x_big = Natural::from(x);
        let digits: Vec<Natural> = digits.into_iter().map(|d| Natural::from(d % x)).collect();
        let k = digits.len();
        let value = Polynomial::new(digits).eval_at(&x_big);
        prop_assert!(value < num_traits::pow(x_big, k));
    }

    #[test]
    fn pack_roundtrip(coeffs in prop::collection::vec(any::<u64>(), 0..40), extra in 1u64..1000) {
        let p = Polynomial::new(coeffs.into_iter().map(Natural::from).collect());
        let base = p.max_coeff() + Natural::from(extra).max(Natural::from(2u8));
        prop_assert_eq!(unpack(&pack(&p, &base).unwrap()), p);
    }

    #[test]
    fn kron_matches_convolution(
        a in prop::collection::vec(0u64..(1 << 20), 0..65),
        b in prop::collection::vec(0u64..(1 << 20), 0..65),
    ) {
        let p = Polynomial::from_u64s(&a);
        let q = Polynomial::from_u64s(&b);
        prop_assert_eq!(kron_multiply(&p, &q), convolve(&p, &q));
    }
}

#[test]
fn corpus_values_survive_reprinting() {
    let env = corpus_env_with_extras();
    for src in CORPUS {
        let t = parse(src).unwrap();
        let again = parse(&print(&t)).unwrap();
        assert_eq!(t.eval(&env).unwrap(), again.eval(&env).unwrap(), "{src}");
    }
}

#[test]
fn corpus_parses_over_u128_when_small() {
    let t = parse_as::<u128>("2 ^ 3 ^ 2 + 7 % 0").unwrap();
    assert_eq!(t.eval(&Env::new()).unwrap(), 519);
}
