//! Power series truncated at a fixed order `N` (coefficients of `t^0..t^N`).

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::SparsePoly;
use super::scalar::GaussianRational;

/// Commutative coefficient ring for [`TruncatedSeries`].
pub trait Ring:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + for<'a> RingRef<'a>
{
    /// Multiplicative inverse when `self` is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self;
}

/// Borrowed arithmetic, so that series code never clones operands.
pub trait RingRef<'a>:
    Sized
    + 'a
    + Add<&'a Self, Output = Self>
    + Sub<&'a Self, Output = Self>
    + Mul<&'a Self, Output = Self>
{
}

impl<'a, T> RingRef<'a> for T where
    T: Sized + 'a + Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>
{
}

impl Ring for BigInt {
    fn unit_inverse(&self) -> Option<Self> {
        (self.abs().is_one()).then(|| self.clone())
    }

    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Ring for GaussianRational {
    fn unit_inverse(&self) -> Option<Self> {
        self.inv()
    }

    fn from_i64(n: i64) -> Self {
        GaussianRational::from_integer(n)
    }
}

impl<'a> Add<&'a SparsePoly> for SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &'a SparsePoly) -> SparsePoly {
        &self + rhs
    }
}

impl<'a> Sub<&'a SparsePoly> for SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &'a SparsePoly) -> SparsePoly {
        &self - rhs
    }
}

impl<'a> Mul<&'a SparsePoly> for SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &'a SparsePoly) -> SparsePoly {
        &self * rhs
    }
}

impl Ring for SparsePoly {
    fn unit_inverse(&self) -> Option<Self> {
        // Units of a polynomial ring over a field are the nonzero constants.
        if self.total_degree() != Some(0) {
            return None;
        }
        let c = self.coefficient(&[]);
        Some(SparsePoly::constant(c.inv()?, self.nvars()))
    }

    fn from_i64(n: i64) -> Self {
        SparsePoly::constant(GaussianRational::from_integer(n), 0)
    }
}

/// `c_0 + c_1 t + … + c_N t^N`, arithmetic performed modulo `t^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries<C> {
    order: usize,
    coeffs: Vec<C>,
}

impl<C: Ring> TruncatedSeries<C> {
    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero());
        Self { order, coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![C::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order, "series truncated at different orders");
        let n = self.order;
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = std::mem::replace(&mut out[i + j], C::zero()) + &(a.clone() * b);
                }
            }
        }
        Self { order: n, coeffs: out }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order, rhs.order, "series truncated at different orders");
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    /// Multiplicative inverse, defined when the constant term is a unit:
    /// solves `Σ_{i≤k} a_i b_{k−i} = δ_{k0}` term by term.
    pub fn inverse(&self) -> Option<Self> {
        let inv0 = self.coeffs[0].unit_inverse()?;
        let mut out: Vec<C> = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for k in 1..=self.order {
            let mut acc = C::zero();
            for i in 1..=k {
                acc = acc + &(self.coeffs[i].clone() * &out[k - i]);
            }
            out.push(-(acc * &inv0));
        }
        Some(Self {
            order: self.order,
            coeffs: out,
        })
    }

    /// Integer power; negative exponents go through [`inverse`](Self::inverse).
    pub fn pow(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut result = Self::one(self.order);
        let mut square = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&square);
            }
            e >>= 1;
            if e > 0 {
                square = square.mul(&square);
            }
        }
        Some(result)
    }
}

/// `(1 + j·t)^e mod t^{N+1}` over the integers.
///
/// For `e < 0` the base is inverted by the geometric series
/// `Σ (−j)^k t^k`, which is exact since the constant term is 1.
pub fn series_expand_power(j: i64, e: i64, order: usize) -> TruncatedSeries<BigInt> {
    let base = if e >= 0 {
        TruncatedSeries::new(vec![BigInt::one(), BigInt::from(j)], order)
    } else {
        let mut geometric = Vec::with_capacity(order + 1);
        let mut term = BigInt::one();
        for _ in 0..=order {
            geometric.push(term.clone());
            term *= -j;
        }
        TruncatedSeries::new(geometric, order)
    };
    base.pow(e.abs()).expect("nonnegative exponent needs no inverse")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn geometric_inverse() {
        let s = series_expand_power(2, -1, 3);
        assert_eq!(s.coeffs(), ints(&[1, -2, 4, -8]).as_slice());
    }

    #[test]
    fn binomial_cube() {
        let s = series_expand_power(1, 3, 3);
        assert_eq!(s.coeffs(), ints(&[1, 3, 3, 1]).as_slice());
    }

    #[test]
    fn order_zero_is_constant_one() {
        assert_eq!(series_expand_power(5, -7, 0).coeffs(), ints(&[1]).as_slice());
    }

    #[test]
    fn non_unit_constant_has_no_inverse() {
        let s = TruncatedSeries::new(ints(&[2, 1]), 3);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn polynomial_coefficients() {
        // (1 + x t)^2 = 1 + 2x t + x^2 t^2
        let x = SparsePoly::var(0, 1);
        let s = TruncatedSeries::new(vec![SparsePoly::one(), x.clone()], 3);
        let sq = s.pow(2).unwrap();
        assert_eq!(sq.coeff(2), &x.pow(2));
        assert!(sq.coeff(3).is_zero());
        let inv = s.inverse().unwrap();
        assert!(inv.mul(&s) == TruncatedSeries::one(3));
    }
}
