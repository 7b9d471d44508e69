//! Brute-force reference values.
//!
//! Everything here is computed by additive recurrences and schoolbook
//! convolution only. Nothing is shared with [`crate::formulas`], so agreement
//! between the two is evidence rather than tautology.

use crate::poly::Polynomial;
use crate::scalar::Nat;

/// Row `n` of Pascal's triangle, built by Pascal's rule.
pub fn pascal_row<N: Nat>(n: u64) -> Vec<N> {
    let mut row = vec![N::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(N::one());
        for w in row.windows(2) {
            next.push(w[0].clone() + w[1].clone());
        }
        next.push(N::one());
        row = next;
    }
    row
}

/// `C(n, k)`, zero for `k > n`.
pub fn pascal_binomial<N: Nat>(n: u64, k: u64) -> N {
    if k > n {
        return N::zero();
    }
    pascal_row::<N>(n).swap_remove(k as usize)
}

/// `Σ_{k=0..j} C(n, k)`.
pub fn sum_binomial<N: Nat>(n: u64, j: u64) -> N {
    pascal_row::<N>(n)
        .into_iter()
        .take(j.saturating_add(1) as usize)
        .fold(N::zero(), |acc, c| acc + c)
}

/// `Σ_v C(n, v·s + j)` over all `v ≥ 0` with `v·s + j ≤ n`.
pub fn multisection_sum<N: Nat>(n: u64, s: u64, j: u64) -> N {
    let row = pascal_row::<N>(n);
    if s == 0 {
        return row.get(j as usize).cloned().unwrap_or_else(N::zero);
    }
    row.into_iter()
        .enumerate()
        .filter(|(i, _)| *i as u64 >= j && (*i as u64 - j).is_multiple_of(s))
        .fold(N::zero(), |acc, (_, c)| acc + c)
}

/// Schoolbook product of two polynomials; the result has `len p + len q - 1`
/// coefficients (none if either factor is empty).
pub fn convolve<N: Nat>(p: &Polynomial<N>, q: &Polynomial<N>) -> Polynomial<N> {
    let (a, b) = (p.coeffs(), q.coeffs());
    if a.is_empty() || b.is_empty() {
        return Polynomial::zero();
    }
    let mut out = vec![N::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    Polynomial::new(out)
}

/// `(1 + x + … + x^(r−1))^n` by repeated convolution.
pub fn expand_power<N: Nat>(r: u64, n: u64) -> Polynomial<N> {
    let ones = Polynomial::new(vec![N::one(); r as usize]);
    let mut acc = Polynomial::new(vec![N::one()]);
    for _ in 0..n {
        acc = convolve(&acc, &ones);
    }
    acc
}

/// `[x^k](1 + x + … + x^(r−1))^n`.
pub fn oracle_poly_coefficient<N: Nat>(n: u64, r: u64, k: u64) -> N {
    expand_power::<N>(r, n).coeff(k as usize)
}

/// `Σ_{k=0..j} [x^k](1 + x + … + x^(r−1))^n`.
pub fn oracle_poly_partial_sum<N: Nat>(n: u64, r: u64, j: u64) -> N {
    expand_power::<N>(r, n)
        .into_coeffs()
        .into_iter()
        .take(j.saturating_add(1) as usize)
        .fold(N::zero(), |acc, c| acc + c)
}

/// `[x^n](1 + x + x^2)^n`.
pub fn oracle_central_trinomial<N: Nat>(n: u64) -> N {
    expand_power::<N>(3, n).coeff(n as usize)
}
