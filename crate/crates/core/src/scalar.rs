//! Scalar traits the model is generic over.
//!
//! Times and head indices share one signed integer type. Machine integers are
//! enough for small hand-built instances; the minimal growth schedule of the
//! log-m family needs arbitrary precision after the first block.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Integer scalar used for orbit times and head indices.
pub trait Int:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    fn of_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("every Int holds u64 values below 2^63")
    }

    fn of_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("every Int holds i64")
    }

    fn add_checked(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
            .ok_or_else(|| Error::Overflow(format!("{self} + {other}")))
    }

    fn sub_checked(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other)
            .ok_or_else(|| Error::Overflow(format!("{self} - {other}")))
    }

    fn mul_checked(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
            .ok_or_else(|| Error::Overflow(format!("{self} * {other}")))
    }

    /// Parses the decimal form written by `Display`.
    fn parse_decimal(s: &str) -> Option<Self> {
        Self::from_str_radix(s, 10).ok()
    }
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + Send
        + Sync
        + 'static
{
}

/// Float type used for entropy estimates.
pub trait Real: num_traits::Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: num_traits::Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Natural log of a positive integer count in the requested float type.
pub(crate) fn ln_count<F: Real>(count: u128) -> F {
    // f64 carries enough precision for the counts produced here; f32 rounds.
    F::from_f64((count as f64).ln()).expect("finite log")
}
