//! Pfaffians of skew-symmetric matrices, numeric and symbolic.
//!
//! Sign convention: the block-diagonal matrix `diag(J, …, J)` with
//! `J = [[0, 1], [−1, 0]]` has Pfaffian `+1`. Odd sizes give `0`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use super::matrix::ExactMatrix;
use super::poly::{PolyMatrix, SparsePoly};
use super::scalar::GaussianRational as Q;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PfaffianError {
    #[error("matrix is {rows}×{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not skew-symmetric (m ≠ −mᵀ)")]
    NotSkew,
}

fn check_skew(m: &ExactMatrix) -> Result<(), PfaffianError> {
    if !m.is_square() {
        return Err(PfaffianError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_skew() {
        return Err(PfaffianError::NotSkew);
    }
    Ok(())
}

/// Pfaffian by skew-symmetric Gaussian elimination.
///
/// At step `k` the entry `(k, k+1)` is made nonzero by a simultaneous
/// row/column swap (which flips the sign), then congruences with unit
/// determinant clear row `k` and row `k+1` beyond the 2×2 block. The matrix
/// becomes block diagonal and the Pfaffian is the product of the `(k, k+1)`
/// pivots.
pub fn pfaffian(m: &ExactMatrix) -> Result<Q, PfaffianError> {
    check_skew(m)?;
    let n = m.rows();
    if n % 2 == 1 {
        return Ok(Q::zero());
    }
    let mut a = m.clone();
    let mut pf = Q::one();
    for k in (0..n).step_by(2) {
        let Some(p) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) else {
            return Ok(Q::zero());
        };
        if p != k + 1 {
            a.swap_rows(k + 1, p);
            a.swap_cols(k + 1, p);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)].clone();
        pf *= &pivot;
        let pivot_inv = pivot.inv().expect("nonzero pivot");
        for j in k + 2..n {
            // Clear (k, j) using column k+1, then (k+1, j) using column k.
            let tau = &a[(k, j)] * &pivot_inv;
            if !tau.is_zero() {
                congruence_add(&mut a, j, k + 1, &tau, k);
            }
            let sigma = &a[(k + 1, j)] * &pivot_inv;
            if !sigma.is_zero() {
                // a[(k+1, k)] = −pivot, so subtract −sigma·(col k).
                congruence_add(&mut a, j, k, &-sigma, k);
            }
        }
    }
    Ok(pf)
}

/// `col_j −= c·col_src; row_j −= c·row_src`, touching rows/cols ≥ `from`.
fn congruence_add(a: &mut ExactMatrix, j: usize, src: usize, c: &Q, from: usize) {
    let n = a.rows();
    for i in from..n {
        let v = &a[(i, src)] * c;
        if !v.is_zero() {
            a[(i, j)] -= &v;
        }
    }
    for i in from..n {
        let v = &a[(src, i)] * c;
        if !v.is_zero() {
            a[(j, i)] -= &v;
        }
    }
}

/// Pfaffian of a skew matrix with polynomial entries, by expansion along the
/// first remaining row, memoised over the set of remaining indices.
pub fn pfaffian_poly(m: &PolyMatrix) -> Result<SparsePoly, PfaffianError> {
    if !m.is_skew() {
        return Err(PfaffianError::NotSkew);
    }
    let n = m.size();
    if n % 2 == 1 {
        return Ok(SparsePoly::zero());
    }
    let mut memo = HashMap::new();
    let all: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(pf_rec(m, all, &mut memo))
}

fn pf_rec(m: &PolyMatrix, remaining: u64, memo: &mut HashMap<u64, SparsePoly>) -> SparsePoly {
    if remaining == 0 {
        return SparsePoly::one();
    }
    if let Some(p) = memo.get(&remaining) {
        return p.clone();
    }
    let first = remaining.trailing_zeros() as usize;
    let rest = remaining & !(1u64 << first);
    let mut acc = SparsePoly::zero();
    let mut position = 0usize;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let entry = m.get(first, j);
        if !entry.is_zero() {
            let minor = pf_rec(m, rest & !(1u64 << j), memo);
            if !minor.is_zero() {
                let term = entry * &minor;
                acc = if position.is_multiple_of(2) { &acc + &term } else { &acc - &term };
            }
        }
        position += 1;
    }
    memo.insert(remaining, acc.clone());
    acc
}

/// `diag(J, …, J)` of size `2·blocks`, padded with `zero_pad` trailing zero
/// rows/columns.
pub fn standard_symplectic(blocks: usize, zero_pad: usize) -> ExactMatrix {
    let n = 2 * blocks + zero_pad;
    let mut m = ExactMatrix::zeros(n, n);
    for b in 0..blocks {
        m[(2 * b, 2 * b + 1)] = Q::one();
        m[(2 * b + 1, 2 * b)] = -Q::one();
    }
    m
}
