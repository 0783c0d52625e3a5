use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Minimal field interface used by the generic polynomial code.
///
/// Elements of parametrised fields (cyclotomic fields of varying order) cannot
/// produce a bare zero, so constants are made "like" an existing element.
pub trait Field: Clone + PartialEq + fmt::Debug
where
    for<'a> &'a Self: Add<&'a Self, Output = Self>
        + Sub<&'a Self, Output = Self>
        + Mul<&'a Self, Output = Self>
        + Neg<Output = Self>,
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Option<Self>;

    fn from_int_like(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        for _ in 0..n.unsigned_abs() {
            acc = &acc + &one;
        }
        if n < 0 {
            -&acc
        } else {
            acc
        }
    }
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_int_like(&self, n: i64) -> Self {
        crate::rational::int(n)
    }
}
