//! Dense polynomials with natural coefficients.

use std::fmt;

use num_traits::Zero;

use crate::scalar::Nat;
use crate::Natural;

/// `coeffs[i]` is the coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial<N = Natural> {
    coeffs: Vec<N>,
}

impl<N: Nat> Polynomial<N> {
    pub fn new(coeffs: Vec<N>) -> Self {
        Polynomial { coeffs }
    }

    /// The zero polynomial, with no stored coefficients.
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self
    where
        N: From<u64>,
    {
        Polynomial::new(coeffs.iter().map(|&c| N::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[N] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<N> {
        self.coeffs
    }

    /// Number of stored coefficients, trailing zeros included.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `[x^i]`, zero past the stored coefficients.
    pub fn coeff(&self, i: usize) -> N {
        self.coeffs.get(i).cloned().unwrap_or_else(N::zero)
    }

    /// Degree of the normalized polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Drops trailing zero coefficients.
    pub fn normalize(&mut self) {
        let keep = self.degree().map_or(0, |d| d + 1);
        self.coeffs.truncate(keep);
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn max_coeff(&self) -> N {
        self.coeffs.iter().max().cloned().unwrap_or_else(N::zero)
    }

    /// Sum of all coefficients, i.e. `f(1)`.
    pub fn coeff_sum(&self) -> N {
        self.coeffs.iter().fold(N::zero(), |acc, c| acc + c.clone())
    }

    /// Number of nonzero coefficients.
    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `f(x)` by Horner's rule.
    pub fn eval_at(&self, x: &N) -> N {
        self.coeffs
            .iter()
            .rev()
            .fold(N::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl<N: Nat> From<Vec<N>> for Polynomial<N> {
    fn from(coeffs: Vec<N>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl<N: fmt::Display + Zero> fmt::Display for Polynomial<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_example() -> Polynomial {
        Polynomial::from_u64s(&[1, 4, 10, 20, 25, 24, 16])
    }

    #[test]
    fn horner_at_one_hundred() {
        assert_eq!(
            paper_example().eval_at(&Natural::from(100u32)),
            Natural::from(16242520100401u64)
        );
    }

    #[test]
    fn normalization() {
        let mut p: Polynomial<u64> = Polynomial::new(vec![1, 0, 3, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        p.normalize();
        assert_eq!(p.coeffs(), &[1, 0, 3]);
        let z: Polynomial<u64> = Polynomial::new(vec![0, 0]);
        assert_eq!(z.degree(), None);
        assert!(z.normalized().is_empty());
    }

    #[test]
    fn sums_and_display() {
        let p = paper_example();
        assert_eq!(p.coeff_sum(), Natural::from(100u32));
        assert_eq!(p.max_coeff(), Natural::from(25u32));
        assert_eq!(p.coeff(99), Natural::from(0u32));
        let q: Polynomial<u64> = Polynomial::new(vec![1, 0, 3]);
        assert_eq!(q.to_string(), "3x^2 + 1");
        assert_eq!(Polynomial::<u64>::zero().to_string(), "0");
    }
}
