//! The integer scalar abstraction shared by every module.
//!
//! All geometry in this crate is exact. Algorithms are written once against
//! [`Scalar`], which is satisfied by `num_bigint::BigInt` as well as the
//! primitive signed integers. The crate-root aliases fix the scalar to
//! `BigInt`; fixed-width instantiations are available for callers that know
//! their inputs are small, and overflow in those panics rather than wrapping.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer ring element.
pub trait Scalar:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_small(value: i64) -> Self {
        Self::from_i64(value).expect("small integer literal fits every scalar type")
    }

    fn from_count(value: usize) -> Self {
        Self::from_usize(value).expect("count fits the scalar type")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Non-negative gcd of all entries; zero for an all-zero (or empty) slice.
pub fn gcd_all<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.gcd(v))
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<T: Scalar>(a: &[T], k: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * k.clone()).collect()
}

pub fn is_zero_vector<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, i| acc * T::from_count(i))
}

/// Converts a slice of `i64` into a vector of scalars.
pub fn vector<T: Scalar>(values: &[i64]) -> Vec<T> {
    values.iter().map(|&v| T::from_small(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn gcd_of_mixed_signs() {
        assert_eq!(gcd_all(&vector::<i64>(&[-4, 6, 10])), 2);
        assert_eq!(gcd_all::<i64>(&[]), 0);
        assert_eq!(gcd_all(&vector::<BigInt>(&[0, 0, -7])), BigInt::from(7));
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial::<i64>(0), 1);
        assert_eq!(factorial::<i64>(5), 120);
        assert_eq!(factorial::<BigInt>(25).to_string(), "15511210043330985984000000");
    }
}
