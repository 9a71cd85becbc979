//! The minimal commutative-ring interface shared by scalars, Laurent polynomials and
//! wall fractions, so matrix algorithms can be written once.

use std::fmt::Debug;

use crate::field::Scalar;

pub trait RingElem: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `self / other` when the quotient exists in the ring.
    fn div_exact(&self, other: &Self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl RingElem for Scalar {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }

    fn one_like(&self) -> Self {
        self.field().one()
    }

    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self * &i)
    }

    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
}
