//! Scalar abstraction for the numerical kernels.
//!
//! Everything in this crate is written against [`Real`], a float-like scalar
//! backed by `num-traits`. The two obvious instantiations are `f32` and `f64`;
//! the crate root exposes `f64` aliases for the laboratory frontend.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, ToPrimitive};

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` literal into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("scalar literal out of range")
    }

    /// Lift a count into the scalar type.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count out of range")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }

    fn half(self) -> Self {
        self / Self::of(2.0)
    }

    fn sq(self) -> Self {
        self * self
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// An extended nonnegative radius: finite, or the `+inf` sentinel used for
/// injectivity radii of complete flat/hyperbolic models. The sentinel compares
/// greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Radius<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Radius::Infinite)
    }

    /// Finite value, or `fallback` for the sentinel.
    pub fn finite_or(&self, fallback: T) -> T {
        match self {
            Radius::Finite(r) => *r,
            Radius::Infinite => fallback,
        }
    }

    pub fn min_with(&self, x: T) -> T {
        match self {
            Radius::Finite(r) => r.min(x),
            Radius::Infinite => x,
        }
    }

    pub fn greater_than(&self, x: T) -> bool {
        match self {
            Radius::Finite(r) => *r > x,
            Radius::Infinite => true,
        }
    }
}

impl<T: PartialOrd> PartialOrd for Radius<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use Radius::*;
        match (self, other) {
            (Infinite, Infinite) => Some(std::cmp::Ordering::Equal),
            (Infinite, Finite(_)) => Some(std::cmp::Ordering::Greater),
            (Finite(_), Infinite) => Some(std::cmp::Ordering::Less),
            (Finite(a), Finite(b)) => a.partial_cmp(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_radius_dominates() {
        let inf: Radius<f64> = Radius::Infinite;
        assert!(inf > Radius::Finite(1e300));
        assert!(Radius::Finite(2.0) > Radius::Finite(1.0));
        assert!(inf.greater_than(f64::MAX));
        assert_eq!(inf.min_with(0.25), 0.25);
    }
}
