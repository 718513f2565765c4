//! Scalar field abstraction.
//!
//! Everything in this crate is generic over a field of characteristic zero.
//! Exact results need an exact field such as [`num_rational::BigRational`];
//! floating point types satisfy the bound but zero tests are then exact
//! comparisons and row reduction is not numerically stable.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Coefficient field.
pub trait Scalar:
    Num + Neg<Output = Self> + FromPrimitive + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer not representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + FromPrimitive + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
}

/// Binomial coefficient `n choose k` as a scalar.
pub fn binomial<K: Scalar>(n: u32, k: u32) -> K {
    if k > n {
        return K::zero();
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    K::from_u128(acc).expect("binomial overflow")
}
