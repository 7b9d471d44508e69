//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on syntax, domain or usage errors, 2 when a
//! verification finds a mismatch. [`run`] returns the captured output so the
//! binary and the tests share one code path.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::catalog::{self, FormulaSpec, Params};
use crate::kronecker;
use crate::parser::{parse, print};
use crate::poly::Polynomial;
use crate::term::Env;
use crate::{FormulaError, Natural};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "arith-terms",
    version,
    about = "Evaluate arithmetic terms and closed-form coefficient formulas exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a term, e.g. `eval "(2^n+1)^n / 2^(n*k) % 2^n" --let n=4 --let k=2`
    Eval {
        term: String,
        /// Variable binding `name=value`; repeatable
        #[arg(long = "let", value_name = "NAME=VALUE", value_parser = parse_binding)]
        bindings: Vec<(String, Natural)>,
    },
    /// Evaluate a catalog formula
    Compute(ComputeArgs),
    /// Verify catalog formulas against their oracles over parameter grids
    Check {
        /// Check a single formula
        #[arg(long, conflicts_with = "all")]
        formula: Option<String>,
        /// Check every formula (the default)
        #[arg(long)]
        all: bool,
        /// Override the largest n of every grid
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Timing reports
    Bench {
        #[command(subcommand)]
        target: BenchTarget,
    },
    /// List the catalog
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BenchTarget {
    /// Schoolbook convolution vs. Kronecker-substitution multiplication
    Kron {
        #[arg(long, default_value_t = 64)]
        degree: usize,
        /// Coefficient size in bits
        #[arg(long, default_value_t = 20)]
        bits: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Time a formula's direct evaluation for n = 1..=max-n
    Formula {
        name: String,
        #[arg(long, default_value_t = 50)]
        max_n: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct ComputeArgs {
    name: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    j: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    /// Digit-extraction base
    #[arg(long)]
    c: Option<u64>,
    /// Polynomial coefficients, constant term first, e.g. `1,4,10`
    #[arg(long, value_delimiter = ',')]
    f: Option<Vec<Natural>>,
    /// Also run the oracle (and the term, if any); exit 2 on disagreement
    #[arg(long)]
    check: bool,
    #[arg(long, conflicts_with = "emit_term")]
    json: bool,
    /// Print the arithmetic term as well
    #[arg(long)]
    emit_term: bool,
}

fn parse_binding(s: &str) -> Result<(String, Natural), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let name = name.trim();
    if name.is_empty()
        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        || name.starts_with(|c: char| c.is_ascii_digit())
    {
        return Err(format!("`{name}` is not an identifier"));
    }
    let value = value
        .trim()
        .parse::<Natural>()
        .map_err(|e| format!("bad value for `{name}`: {e}"))?;
    Ok((name.to_owned(), value))
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            status: EXIT_OK,
        }
    }

    fn error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            status: EXIT_ERROR,
        }
    }
}

/// Runs the CLI against the built-in catalog. `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_catalog(args, catalog::catalog())
}

/// Runs the CLI with `specs` standing in for the catalog.
pub fn run_with_catalog<I, T>(args: I, specs: &[FormulaSpec]) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    stdout: String::new(),
                    stderr: text,
                    status: EXIT_ERROR,
                },
            };
        }
    };
    match cli.command {
        Command::Eval { term, bindings } => cmd_eval(&term, bindings),
        Command::Compute(args) => cmd_compute(args, specs),
        Command::Check {
            formula,
            all: _,
            max_n,
            json,
        } => cmd_check(formula.as_deref(), max_n, json, specs),
        Command::Bench { target } => cmd_bench(target, specs),
        Command::List { json } => cmd_list(json, specs),
    }
}

fn find<'a>(specs: &'a [FormulaSpec], name: &str) -> Result<&'a FormulaSpec, FormulaError> {
    specs
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| FormulaError::UnknownFormula(name.to_owned()))
}

fn cmd_eval(src: &str, bindings: Vec<(String, Natural)>) -> Outcome {
    let term = match parse(src) {
        Ok(t) => t,
        Err(e) => return Outcome::error(e),
    };
    let env: Env = bindings.into_iter().collect();
    match term.eval(&env) {
        Ok(v) => Outcome::ok(format!("{v}\n")),
        Err(e) => Outcome::error(e),
    }
}

fn compute_params(args: &ComputeArgs, spec: &FormulaSpec) -> Result<Params, String> {
    let mut params = Params::new();
    let ints = [
        ("n", args.n),
        ("j", args.j),
        ("k", args.k),
        ("s", args.s),
        ("r", args.r),
        ("c", args.c),
    ];
    for (name, value) in ints {
        if let Some(v) = value {
            if !spec.params.contains(&name) {
                return Err(format!(
                    "{} takes no parameter --{name} (parameters: {})",
                    spec.name,
                    spec.params.join(", ")
                ));
            }
            params.set(name, v);
        }
    }
    if let Some(f) = &args.f {
        if !spec.params.contains(&"f") {
            return Err(format!("{} takes no polynomial --f", spec.name));
        }
        params.set_poly(Polynomial::new(f.clone()));
    }
    Ok(params)
}

fn cmd_compute(args: ComputeArgs, specs: &[FormulaSpec]) -> Outcome {
    let spec = match find(specs, &args.name) {
        Ok(s) => s,
        Err(e) => return Outcome::error(e),
    };
    let params = match compute_params(&args, spec) {
        Ok(p) => p,
        Err(e) => return Outcome::error(e),
    };
    let value = match (spec.direct_eval)(&params) {
        Ok(v) => v,
        Err(e) => return Outcome::error(e),
    };
    let term = spec.build_term(&params).ok();

    let mut checked = false;
    if args.check {
        if let Err(m) = spec.verify(&params) {
            return Outcome {
                stdout: format!("{value}\n"),
                stderr: format!("mismatch: {m}\n"),
                status: EXIT_MISMATCH,
            };
        }
        checked = true;
    }

    if args.json {
        let obj = json!({
            "name": spec.name,
            "params": params.to_json(),
            "value": value.to_string(),
            "checked": checked,
            "term_size": term.as_ref().map(|t| t.size()),
        });
        return Outcome::ok(format!("{obj}\n"));
    }
    let mut out = format!("{value}\n");
    if args.emit_term {
        match &term {
            Some(t) => writeln!(out, "{}", print(t)).unwrap(),
            None => writeln!(out, "# {}", FormulaError::NoTerm(spec.name)).unwrap(),
        }
    }
    Outcome::ok(out)
}

fn cmd_check(
    formula: Option<&str>,
    max_n: Option<u64>,
    json: bool,
    specs: &[FormulaSpec],
) -> Outcome {
    let selected: Vec<FormulaSpec> = match formula {
        Some(name) => match find(specs, name) {
            Ok(s) => vec![*s],
            Err(e) => return Outcome::error(e),
        },
        None => specs.to_vec(),
    };
    let reports = catalog::check_all(&selected, max_n);
    let all_ok = reports.iter().all(|r| r.ok());
    let stdout = if json {
        format!("{}\n", json!({ "ok": all_ok, "entries": reports }))
    } else {
        let mut out = String::new();
        for r in &reports {
            let tag = if r.ok() { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{tag} {}: {}/{} cases agree",
                r.name, r.passed, r.cases
            )
            .unwrap();
            for f in &r.failures {
                writeln!(out, "    {f}").unwrap();
            }
        }
        let total: usize = reports.iter().map(|r| r.cases).sum();
        let passed: usize = reports.iter().map(|r| r.passed).sum();
        writeln!(out, "{passed}/{total} cases agree").unwrap();
        out
    };
    Outcome {
        stdout,
        stderr: String::new(),
        status: if all_ok { EXIT_OK } else { EXIT_MISMATCH },
    }
}

fn cmd_bench(target: BenchTarget, specs: &[FormulaSpec]) -> Outcome {
    match target {
        BenchTarget::Kron {
            degree,
            bits,
            trials,
            seed,
            json,
        } => {
            let report = kronecker::bench_multiply(degree, bits, trials, seed);
            let stdout = if json {
                format!(
                    "{}\n",
                    serde_json::to_string(&report).expect("report serializes")
                )
            } else {
                report.to_key_values()
            };
            Outcome {
                stdout,
                stderr: String::new(),
                status: if report.products_equal {
                    EXIT_OK
                } else {
                    EXIT_MISMATCH
                },
            }
        }
        BenchTarget::Formula { name, max_n, json } => {
            let spec = match find(specs, &name) {
                Ok(s) => s,
                Err(e) => return Outcome::error(e),
            };
            let report = match catalog::bench_formula(spec, max_n) {
                Ok(r) => r,
                Err(e) => return Outcome::error(e),
            };
            if json {
                return Outcome::ok(format!(
                    "{}\n",
                    serde_json::to_string(&report).expect("report serializes")
                ));
            }
            let mut out = format!("formula={}\n", report.name);
            for row in &report.rows {
                writeln!(
                    out,
                    "n={} params=[{}] nanos={} value_bits={}",
                    row.n, row.params, row.nanos, row.value_bits
                )
                .unwrap();
            }
            Outcome::ok(out)
        }
    }
}

fn cmd_list(json: bool, specs: &[FormulaSpec]) -> Outcome {
    if json {
        let entries: Vec<_> = specs
            .iter()
            .map(|s| {
                json!({
                    "name": s.name,
                    "params": s.params,
                    "domain": s.domain,
                    "summary": s.summary,
                    "has_term": s.has_term(),
                })
            })
            .collect();
        return Outcome::ok(format!("{}\n", json!({ "formulas": entries })));
    }
    let mut out = String::new();
    for s in specs {
        let kind = if s.has_term() {
            "term"
        } else {
            "signed, not a term"
        };
        writeln!(
            out,
            "{:<22} ({}) [{}]\n    {}\n    domain: {}",
            s.name,
            s.params.join(", "),
            kind,
            s.summary,
            s.domain
        )
        .unwrap();
    }
    Outcome::ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Outcome {
        run(std::iter::once("arith-terms").chain(args.iter().copied()))
    }

    #[test]
    fn binding_parser() {
        assert_eq!(
            parse_binding("n=4").unwrap(),
            ("n".into(), Natural::from(4u8))
        );
        assert!(parse_binding("n").is_err());
        assert!(parse_binding("4n=1").is_err());
        assert!(parse_binding("n=-1").is_err());
    }

    #[test]
    fn eval_conventions() {
        assert_eq!(cli(&["eval", "0^0"]).stdout, "1\n");
        assert_eq!(cli(&["eval", "7 % 0"]).stdout, "7\n");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(cli(&["frobnicate"]).status, EXIT_ERROR);
        assert_eq!(cli(&["compute"]).status, EXIT_ERROR);
        assert_eq!(cli(&["--help"]).status, EXIT_OK);
    }

    #[test]
    fn stray_parameter_rejected() {
        let out = cli(&["compute", "binomial", "--n", "4", "--k", "2", "--s", "3"]);
        assert_eq!(out.status, EXIT_ERROR);
        assert!(out.stderr.contains("--s"));
    }
}
