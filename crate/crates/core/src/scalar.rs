//! Coefficient fields.
//!
//! Every algorithm in this crate runs exact Gaussian elimination, so the
//! coefficient type must be an exact field: zero tests have to be decisive.
//! [`Field`] is therefore implemented only for rational types, never for
//! floating point.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Num
    + Signed
    + Neg<Output = Self>
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the coefficient field")
    }

    fn from_fraction(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }
}

impl Field for Ratio<BigInt> {}
impl Field for Ratio<i64> {}
impl Field for Ratio<i128> {}
