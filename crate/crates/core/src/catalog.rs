//! The formula catalog: one [`FormulaSpec`] per closed form, tying together
//! its parameter domain, term builder, direct evaluator, oracle and the
//! parameter grid it is verified on.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::formulas::{self as f, FormulaError};
use crate::oracles as o;
use crate::poly::Polynomial;
use crate::term::{Env, Term};
use crate::Natural;

/// Named parameter values for one catalog evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    ints: BTreeMap<String, u64>,
    poly: Option<Polynomial>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: u64) -> Self {
        self.ints.insert(name.to_owned(), value);
        self
    }

    pub fn with_poly(mut self, p: Polynomial) -> Self {
        self.poly = Some(p);
        self
    }

    pub fn set(&mut self, name: &str, value: u64) {
        self.ints.insert(name.to_owned(), value);
    }

    pub fn set_poly(&mut self, p: Polynomial) {
        self.poly = Some(p);
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.ints.get(name).copied()
    }

    pub fn poly(&self) -> Option<&Polynomial> {
        self.poly.as_ref()
    }

    /// Integer parameters as variable bindings.
    pub fn env(&self) -> Env {
        self.ints
            .iter()
            .map(|(k, &v)| (k.as_str(), Natural::from(v)))
            .collect()
    }

    /// Integer parameters as numbers; the polynomial, if any, as `f`, a list
    /// of decimal strings.
    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.ints {
            map.insert(k.clone(), json!(v));
        }
        if let Some(p) = &self.poly {
            let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            map.insert("f".into(), json!(coeffs));
        }
        Value::Object(map)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.ints.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if let Some(p) = &self.poly {
            let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            parts.push(format!("f=[{}]", coeffs.join(",")));
        }
        f.write_str(&parts.join(", "))
    }
}

fn param(formula: &'static str, p: &Params, name: &'static str) -> Result<u64, FormulaError> {
    p.get(name).ok_or(FormulaError::MissingParam {
        formula,
        param: name,
    })
}

fn poly_param<'a>(formula: &'static str, p: &'a Params) -> Result<&'a Polynomial, FormulaError> {
    p.poly().ok_or(FormulaError::MissingParam {
        formula,
        param: "f",
    })
}

pub type Eval = fn(&Params) -> Result<Natural, FormulaError>;
pub type BuildTerm = fn(&Params) -> Result<Term, FormulaError>;

/// One catalog entry.
#[derive(Clone, Copy)]
pub struct FormulaSpec {
    pub name: &'static str,
    pub summary: &'static str,
    /// Parameter names; `f` denotes a polynomial (coefficient list).
    pub params: &'static [&'static str],
    pub domain: &'static str,
    /// Checks the domain and produces the term; `None` if the formula is not
    /// an arithmetic term.
    pub term: Option<BuildTerm>,
    pub direct_eval: Eval,
    /// Brute-force reference; total, never checks the domain.
    pub oracle: Eval,
    pub grid: fn(u64) -> Vec<Params>,
    pub default_max_n: u64,
    /// Representative parameters for size `n` in benchmarks.
    pub bench_point: fn(u64) -> Option<Params>,
}

impl fmt::Debug for FormulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormulaSpec")
            .field("name", &self.name)
            .finish()
    }
}

impl FormulaSpec {
    pub fn has_term(&self) -> bool {
        self.term.is_some()
    }

    pub fn build_term(&self, p: &Params) -> Result<Term, FormulaError> {
        match self.term {
            Some(build) => build(p),
            None => Err(FormulaError::NoTerm(self.name)),
        }
    }

    /// Evaluates every available route and compares them.
    pub fn verify(&self, p: &Params) -> Result<Natural, Mismatch> {
        let mismatch = |detail: String| Mismatch {
            formula: self.name,
            params: p.to_string(),
            detail,
        };
        let direct = (self.direct_eval)(p).map_err(|e| mismatch(e.to_string()))?;
        let oracle = (self.oracle)(p).map_err(|e| mismatch(e.to_string()))?;
        if direct != oracle {
            return Err(mismatch(format!("formula {direct} != oracle {oracle}")));
        }
        if self.term.is_some() {
            let term = self.build_term(p).map_err(|e| mismatch(e.to_string()))?;
            let via_term = term.eval(&p.env()).map_err(|e| mismatch(e.to_string()))?;
            if via_term != direct {
                return Err(mismatch(format!("term {via_term} != formula {direct}")));
            }
        }
        Ok(direct)
    }

    pub fn grid_with_default(&self, max_n: Option<u64>) -> Vec<Params> {
        (self.grid)(max_n.unwrap_or(self.default_max_n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{formula}({params}): {detail}")]
pub struct Mismatch {
    pub formula: &'static str,
    pub params: String,
    pub detail: String,
}

// --- grids ---------------------------------------------------------------

fn binomial_grid(max_n: u64) -> Vec<Params> {
    (1..=max_n)
        .flat_map(|n| (0..=n).map(move |k| Params::new().with("n", n).with("k", k)))
        .collect()
}

fn partial_sum_grid(max_n: u64) -> Vec<Params> {
    (2..=max_n)
        .flat_map(|n| (0..=n - 2).map(move |j| Params::new().with("n", n).with("j", j)))
        .collect()
}

fn boardman_grid(max_n: u64) -> Vec<Params> {
    (1..=max_n)
        .flat_map(|n| (1..=n).map(move |j| Params::new().with("n", n).with("j", j)))
        .collect()
}

fn multisection_grid(max_n: u64) -> Vec<Params> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for s in 2..=6u64 {
            if (s - 1) * n < 2 {
                continue;
            }
            for j in 0..s {
                out.push(Params::new().with("n", n).with("s", s).with("j", j));
            }
        }
    }
    out
}

fn poly_coefficient_grid(max_n: u64) -> Vec<Params> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for r in 2..=5u64 {
            for k in 0..=n * (r - 1) {
                out.push(Params::new().with("n", n).with("r", r).with("k", k));
            }
        }
    }
    out
}

fn poly_partial_sum_grid(max_n: u64) -> Vec<Params> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for r in 2..=5u64 {
            let top = n * (r - 1);
            if top < 2 {
                continue;
            }
            for j in 0..=top - 2 {
                out.push(Params::new().with("n", n).with("r", r).with("j", j));
            }
        }
    }
    out
}

fn central_trinomial_grid(max_n: u64) -> Vec<Params> {
    (1..=max_n).map(|n| Params::new().with("n", n)).collect()
}

/// The worked decimal example at base 100, then each Pascal row `n` at base
/// `2^n` (which is `f(1)`, the coefficient sum), every index.
fn digit_extract_grid(max_n: u64) -> Vec<Params> {
    let mut out = Vec::new();
    let example = Polynomial::from_u64s(&[1, 4, 10, 20, 25, 24, 16]);
    for k in 0..7 {
        out.push(
            Params::new()
                .with("k", k)
                .with("c", 100)
                .with_poly(example.clone()),
        );
    }
    for n in 1..=max_n.min(63) {
        let row = Polynomial::new(o::pascal_row::<Natural>(n));
        for k in 0..=n {
            out.push(
                Params::new()
                    .with("k", k)
                    .with("c", 1 << n)
                    .with_poly(row.clone()),
            );
        }
    }
    out
}

// --- entries -------------------------------------------------------------

macro_rules! p {
    ($name:literal, $params:ident, $($field:literal),*) => {
        ($(param($name, $params, $field)?),*)
    };
}

pub static CATALOG: [FormulaSpec; 8] = [
    FormulaSpec {
        name: "digit_extract",
        summary: "[x^k]f(x) = ⌊f(c)/c^k⌋ mod c",
        params: &["f", "k", "c"],
        domain: "0 ≤ k ≤ deg f, [x^i]f < c for i ≤ k",
        term: Some(|p| {
            let f = poly_param("digit_extract", p)?;
            let (k, c) = p!("digit_extract", p, "k", "c");
            f::digit_extract(f, k as usize, &Natural::from(c))?;
            Ok(f::digit_extract_term(f))
        }),
        direct_eval: |p| {
            let f = poly_param("digit_extract", p)?;
            let (k, c) = p!("digit_extract", p, "k", "c");
            f::digit_extract(f, k as usize, &Natural::from(c))
        },
        oracle: |p| {
            let f = poly_param("digit_extract", p)?;
            Ok(f.coeff(param("digit_extract", p, "k")? as usize))
        },
        grid: digit_extract_grid,
        default_max_n: 20,
        bench_point: |n| {
            let row = Polynomial::new(o::pascal_row::<Natural>(n));
            (n < 64).then(|| Params::new().with("k", n / 2).with("c", 1 << n).with_poly(row))
        },
    },
    FormulaSpec {
        name: "binomial",
        summary: "C(n,k) = ⌊(2^n+1)^n / 2^(nk)⌋ mod 2^n",
        params: &["n", "k"],
        domain: "n ≥ 1, 0 ≤ k ≤ n",
        term: Some(|p| {
            let (n, k) = p!("binomial", p, "n", "k");
            f::binomial_domain(n, k)?;
            Ok(f::binomial_term())
        }),
        direct_eval: |p| {
            let (n, k) = p!("binomial", p, "n", "k");
            f::binomial(n, k)
        },
        oracle: |p| {
            let (n, k) = p!("binomial", p, "n", "k");
            Ok(o::pascal_binomial(n, k))
        },
        grid: binomial_grid,
        default_max_n: 40,
        bench_point: |n| (n >= 1).then(|| Params::new().with("n", n).with("k", n / 2)),
    },
    FormulaSpec {
        name: "partial_sum",
        summary: "Σ_{k≤j} C(n,k) = ⌊(2^n+1)^n / 2^(n(n−j))⌋ mod (2^n − 1)",
        params: &["n", "j"],
        domain: "0 ≤ j ≤ n−2",
        term: Some(|p| {
            let (n, j) = p!("partial_sum", p, "n", "j");
            f::partial_sum_domain(n, j)?;
            Ok(f::partial_sum_term())
        }),
        direct_eval: |p| {
            let (n, j) = p!("partial_sum", p, "n", "j");
            f::partial_sum(n, j)
        },
        oracle: |p| {
            let (n, j) = p!("partial_sum", p, "n", "j");
            Ok(o::sum_binomial(n, j))
        },
        grid: partial_sum_grid,
        default_max_n: 40,
        bench_point: |n| (n >= 2).then(|| Params::new().with("n", n).with("j", n / 2 - 1)),
    },
    FormulaSpec {
        name: "partial_sum_boardman",
        summary: "Σ_{k≤j} C(n,k) = 1 + (⌊(1 − (2^n+1)^n) / ((2^n − 1)·2^(nj))⌋ mod 2^n), signed",
        params: &["n", "j"],
        domain: "n ≥ 1, 1 ≤ j ≤ n",
        term: None,
        direct_eval: |p| {
            let (n, j) = p!("partial_sum_boardman", p, "n", "j");
            f::partial_sum_boardman(n, j)
        },
        oracle: |p| {
            let (n, j) = p!("partial_sum_boardman", p, "n", "j");
            Ok(o::sum_binomial(n, j))
        },
        grid: boardman_grid,
        default_max_n: 30,
        bench_point: |n| (n >= 1).then(|| Params::new().with("n", n).with("j", n)),
    },
    FormulaSpec {
        name: "multisection",
        summary: "Σ_v C(n, vs+j) = ⌊((2^n+1)^n mod (2^(ns) − 1)) / 2^(nj)⌋ mod 2^n",
        params: &["n", "s", "j"],
        domain: "n ≥ 1, s ≥ 2, 0 ≤ j < s, (s−1)·n ≥ 2",
        term: Some(|p| {
            let (n, s, j) = p!("multisection", p, "n", "s", "j");
            f::multisection_domain(n, s, j)?;
            Ok(f::multisection_term())
        }),
        direct_eval: |p| {
            let (n, s, j) = p!("multisection", p, "n", "s", "j");
            f::multisection(n, s, j)
        },
        oracle: |p| {
            let (n, s, j) = p!("multisection", p, "n", "s", "j");
            Ok(o::multisection_sum(n, s, j))
        },
        grid: multisection_grid,
        default_max_n: 24,
        bench_point: |n| (n >= 1).then(|| Params::new().with("n", n).with("s", 3).with("j", 1)),
    },
    FormulaSpec {
        name: "poly_coefficient",
        summary: "[x^k](1+…+x^(r−1))^n = ⌊((r^(rn) − 1)/(r^(n+k) − r^k))^n⌋ mod r^n",
        params: &["n", "r", "k"],
        domain: "n ≥ 1, r ≥ 2, 0 ≤ k ≤ n(r−1)",
        term: Some(|p| {
            let (n, r, k) = p!("poly_coefficient", p, "n", "r", "k");
            f::poly_coefficient_domain(n, r, k)?;
            Ok(f::poly_coefficient_term())
        }),
        direct_eval: |p| {
            let (n, r, k) = p!("poly_coefficient", p, "n", "r", "k");
            f::poly_coefficient(n, r, k)
        },
        oracle: |p| {
            let (n, r, k) = p!("poly_coefficient", p, "n", "r", "k");
            Ok(o::oracle_poly_coefficient(n, r, k))
        },
        grid: poly_coefficient_grid,
        default_max_n: 12,
        bench_point: |n| (n >= 1).then(|| Params::new().with("n", n).with("r", 4).with("k", n)),
    },
    FormulaSpec {
        name: "poly_partial_sum",
        summary: "Σ_{k≤j} [x^k](1+…+x^(r−1))^n = (((r^(rn) − 1)/(r^n − 1))^n mod r^(n(j+1))) mod (r^n − 1)",
        params: &["n", "r", "j"],
        domain: "n ≥ 1, r ≥ 2, 0 ≤ j ≤ n(r−1)−2",
        term: Some(|p| {
            let (n, r, j) = p!("poly_partial_sum", p, "n", "r", "j");
            f::poly_partial_sum_domain(n, r, j)?;
            Ok(f::poly_partial_sum_term())
        }),
        direct_eval: |p| {
            let (n, r, j) = p!("poly_partial_sum", p, "n", "r", "j");
            f::poly_partial_sum(n, r, j)
        },
        oracle: |p| {
            let (n, r, j) = p!("poly_partial_sum", p, "n", "r", "j");
            Ok(o::oracle_poly_partial_sum(n, r, j))
        },
        grid: poly_partial_sum_grid,
        default_max_n: 10,
        bench_point: |n| (n >= 1).then(|| Params::new().with("n", n).with("r", 3).with("j", n)),
    },
    FormulaSpec {
        name: "central_trinomial",
        summary: "[x^n](x^2+x+1)^n = ⌊((27^n − 1)/(9^n − 3^n))^n⌋ mod 3^n",
        params: &["n"],
        domain: "n ≥ 1",
        term: Some(|p| {
            f::central_trinomial_domain(param("central_trinomial", p, "n")?)?;
            Ok(f::central_trinomial_term())
        }),
        direct_eval: |p| f::central_trinomial(param("central_trinomial", p, "n")?),
        oracle: |p| Ok(o::oracle_central_trinomial(param("central_trinomial", p, "n")?)),
        grid: central_trinomial_grid,
        default_max_n: 100,
        bench_point: |n| (n >= 1).then(|| Params::new().with("n", n)),
    },
];

pub fn catalog() -> &'static [FormulaSpec] {
    &CATALOG
}

pub fn lookup(name: &str) -> Result<&'static FormulaSpec, FormulaError> {
    CATALOG
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| FormulaError::UnknownFormula(name.to_owned()))
}

/// Builds the term for `name` at `params`.
pub fn build_term(name: &str, params: &Params) -> Result<Term, FormulaError> {
    lookup(name)?.build_term(params)
}

// --- verification ----------------------------------------------------------

/// Outcome of running one entry over its grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    /// The first few mismatches, rendered.
    pub failures: Vec<String>,
}

impl EntryReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

const MAX_REPORTED_FAILURES: usize = 5;

pub fn check_entry(spec: &FormulaSpec, max_n: Option<u64>) -> EntryReport {
    let grid = spec.grid_with_default(max_n);
    let mut passed = 0;
    let mut failures = Vec::new();
    for p in &grid {
        match spec.verify(p) {
            Ok(_) => passed += 1,
            Err(m) => {
                if failures.len() < MAX_REPORTED_FAILURES {
                    failures.push(m.to_string());
                }
            }
        }
    }
    EntryReport {
        name: spec.name,
        cases: grid.len(),
        passed,
        failures,
    }
}

/// Checks every entry, one thread per entry; reports come back in input order.
pub fn check_all(specs: &[FormulaSpec], max_n: Option<u64>) -> Vec<EntryReport> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = specs
            .iter()
            .map(|spec| scope.spawn(move || check_entry(spec, max_n)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread panicked"))
            .collect()
    })
}

// --- benchmarking ----------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormulaBenchRow {
    pub n: u64,
    pub params: String,
    pub nanos: u64,
    pub value_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormulaBenchReport {
    pub name: &'static str,
    pub max_n: u64,
    pub rows: Vec<FormulaBenchRow>,
}

/// Times `direct_eval` at the entry's representative point for each `n ≤ max_n`.
pub fn bench_formula(spec: &FormulaSpec, max_n: u64) -> Result<FormulaBenchReport, FormulaError> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let Some(p) = (spec.bench_point)(n) else {
            continue;
        };
        let start = Instant::now();
        let value = (spec.direct_eval)(&p)?;
        let nanos = u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX);
        rows.push(FormulaBenchRow {
            n,
            params: p.to_string(),
            nanos,
            value_bits: value.bits(),
        });
    }
    Ok(FormulaBenchReport {
        name: spec.name,
        max_n,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_stable() {
        let names: Vec<_> = catalog().iter().map(|s| s.name).collect();
        assert_eq!(
            names,
            [
                "digit_extract",
                "binomial",
                "partial_sum",
                "partial_sum_boardman",
                "multisection",
                "poly_coefficient",
                "poly_partial_sum",
                "central_trinomial"
            ]
        );
    }

    #[test]
    fn boardman_has_no_term() {
        let p = Params::new().with("n", 4).with("j", 4);
        assert_eq!(
            build_term("partial_sum_boardman", &p),
            Err(FormulaError::NoTerm("partial_sum_boardman"))
        );
        assert!(matches!(
            build_term("nope", &p),
            Err(FormulaError::UnknownFormula(_))
        ));
    }

    #[test]
    fn built_terms_only_use_declared_vars() {
        for spec in catalog().iter().filter(|s| s.has_term()) {
            let p = spec.grid_with_default(Some(3)).into_iter().next().unwrap();
            let t = spec.build_term(&p).unwrap();
            for v in t.free_vars() {
                assert!(
                    spec.params.contains(&v),
                    "{}: stray variable {v}",
                    spec.name
                );
            }
        }
    }

    #[test]
    fn missing_parameter() {
        let spec = lookup("binomial").unwrap();
        let err = (spec.direct_eval)(&Params::new().with("n", 3)).unwrap_err();
        assert_eq!(
            err,
            FormulaError::MissingParam {
                formula: "binomial",
                param: "k"
            }
        );
    }

    #[test]
    fn small_grids_pass() {
        for report in check_all(catalog(), Some(6)) {
            assert!(report.ok(), "{report:?}");
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn corrupted_entry_is_caught() {
        let mut bad = *lookup("binomial").unwrap();
        bad.direct_eval = |p| {
            let v = f::binomial(p.get("n").unwrap(), p.get("k").unwrap())?;
            Ok(if p.get("n") == Some(5) { v + 1u32 } else { v })
        };
        let report = check_entry(&bad, Some(8));
        assert!(!report.ok());
        assert_eq!(report.cases - report.passed, 6);
    }

    #[test]
    fn bench_rows_are_monotone() {
        let r = bench_formula(lookup("central_trinomial").unwrap(), 10).unwrap();
        let ns: Vec<u64> = r.rows.iter().map(|row| row.n).collect();
        assert_eq!(ns, (1..=10).collect::<Vec<_>>());
    }
}
