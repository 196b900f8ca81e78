//! Counter scalar abstraction.
//!
//! Counter values are natural numbers. Every algorithm in the crate is
//! written against [`Counter`] so the same code runs on `u32`, `u64` or
//! `u128` counters; all additions are checked and overflow is an error.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{NumCast, PrimInt, Unsigned};

use crate::error::{Error, Result};

/// An unsigned machine integer usable as a counter value.
pub trait Counter:
    PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static
{
    /// Checked addition mapped onto the crate error type.
    fn add_checked(self, other: Self) -> Result<Self> {
        self.checked_add(&other).ok_or(Error::CounterOverflow)
    }

    /// Lossless conversion from `u64`, failing when the value does not fit.
    fn from_u64(value: u64) -> Result<Self> {
        <Self as NumCast>::from(value).ok_or(Error::CounterOverflow)
    }

    /// Conversion to `u64`, failing when the value does not fit.
    fn to_u64_checked(self) -> Result<u64> {
        self.to_u64().ok_or(Error::CounterOverflow)
    }
}

impl<T> Counter for T where
    T: PrimInt + Unsigned + Hash + Debug + Display + Default + Send + Sync + 'static
{
}

/// `a + b + c` on optional counters; `None` is absorbing.
pub(crate) fn sum3<C: Counter>(a: Option<C>, b: C, c: Option<C>) -> Result<Option<C>> {
    match (a, c) {
        (Some(a), Some(c)) => Ok(Some(a.add_checked(b)?.add_checked(c)?)),
        _ => Ok(None),
    }
}
