//! Arithmetic terms over arbitrary-precision naturals.
//!
//! * [`term`]: the term language (`+`, `∸`, `×`, `⌊/⌋`, `mod`, `^`) and its
//!   exact, totalized evaluator, generic over any [`Nat`] scalar.
//! * [`signed`]: the integer-valued extension with true subtraction.
//! * [`parser`]: concrete syntax, parsing and printing.
//! * [`formulas`]: closed forms for binomial coefficients, their partial sums
//!   and multisections, polynomial coefficients and central trinomial
//!   coefficients, each as a direct evaluator and as a literal term.
//! * [`oracles`]: independent brute-force references.
//! * [`kronecker`]: Kronecker substitution and packed polynomial products.
//! * [`catalog`]: the table of formulas with their domains, grids and checks.

pub mod catalog;
pub mod cli;
pub mod formulas;
pub mod kronecker;
pub mod oracles;
pub mod parser;
pub mod poly;
pub mod scalar;
pub mod signed;
pub mod term;

/// Arbitrary-precision natural number; the default scalar everywhere.
pub type Natural = num_bigint::BigUint;

/// A term over fixed-width 64-bit naturals (overflow is an evaluation error).
pub type Term64 = term::Term<u64>;
pub type Env64 = term::Env<u64>;
pub type Polynomial64 = poly::Polynomial<u64>;

pub use formulas::FormulaError;
pub use parser::{parse, parse_as, print, ParseError};
pub use poly::Polynomial;
pub use scalar::Nat;
pub use signed::{eval_signed, SignedExpr, SignedValue};
pub use term::{eval, term_depth, term_size, Env, EvalError, Term};
