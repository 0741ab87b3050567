//! Exact arithmetic over the rationals and the integers.
//!
//! Everything here is dense and exact: matrices of arbitrary-precision
//! rationals, reduced row-echelon forms with a fixed pivot rule, rational and
//! integral kernels, and subspaces kept in canonical reduced form so that
//! equality of subspaces is equality of representations.

mod integer;
mod matrix;
mod subspace;

pub use integer::{gcd_vec, integer_kernel, integer_rank, integer_solve, primitive, row_hnf};
pub use matrix::{left_nullspace, rank, right_nullspace, rref, RationalMatrix};
pub use subspace::Subspace;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;
pub type Integer = BigInt;
pub type IntegerVector = Vec<BigInt>;

/// Rational from a machine integer.
pub fn q(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Rational from a fraction `n / d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn zvec(v: &[i64]) -> IntegerVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Exact dot product of two rational vectors of equal length.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Dot product of a rational functional with an integer point.
pub fn dot_int(a: &[Rational], b: &[i64]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, &y)| acc + x * BigInt::from(y))
}

/// Scale a nonzero rational vector to a primitive integer vector whose first
/// nonzero entry is positive. Returns `None` for the zero vector.
pub fn normalize(v: &[Rational]) -> Option<IntegerVector> {
    let first = v.iter().position(|x| !x.is_zero())?;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = gcd_vec(&ints);
    for x in ints.iter_mut() {
        *x = &*x / &g;
    }
    if ints[first].is_negative() {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    Some(ints)
}

/// Try to convert a rational to an `i64` if it is an integer in range.
pub fn as_i64(x: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}
