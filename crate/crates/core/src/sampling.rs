//! Seeded generation of random exact vectors and matrices.
//!
//! Everything here is driven by a `ChaCha8Rng` seeded from a `u64`, so the
//! same seed always produces the same samples on every platform.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{ExactMatrix, GaussianRational as Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer in `[-bound, bound]`.
pub fn small_int<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

/// Rational `a/b` with `|a| ≤ bound`, `1 ≤ b ≤ bound`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Q {
    Q::from_ratio(small_int(rng, bound), rng.gen_range(1..=bound.max(1)))
}

/// Gaussian integer; the imaginary part is nonzero about a quarter of the
/// time so that ℚ(i) arithmetic is actually exercised.
pub fn small_gaussian<R: Rng>(rng: &mut R, bound: i64) -> Q {
    let re = small_int(rng, bound);
    let im = if rng.gen_ratio(1, 4) { small_int(rng, bound) } else { 0 };
    Q::from_parts((re, 1), (im, 1))
}

/// Nonzero vector of small Gaussian integers.
pub fn nonzero_vector<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vec<Q> {
    assert!(dim > 0, "no nonzero vectors in the zero space");
    loop {
        let v: Vec<Q> = (0..dim).map(|_| small_gaussian(rng, bound)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

pub fn rational_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| small_rational(rng, bound))
}

/// Random skew-symmetric matrix with rational entries.
pub fn skew_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = small_rational(rng, bound);
            m[(j, i)] = -&x;
            m[(i, j)] = x;
        }
    }
    m
}

/// Random invertible matrix (rejection sampling on the determinant).
pub fn invertible_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> ExactMatrix {
    loop {
        let m = ExactMatrix::from_fn(n, n, |_, _| Q::from_integer(small_int(rng, bound)));
        if !m.det().is_zero() {
            return m;
        }
    }
}
