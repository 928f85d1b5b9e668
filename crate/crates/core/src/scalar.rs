//! Scalar abstractions shared by the algebraic and numerical layers.
//!
//! [`Scalar`] is the ring-level bound used by the torsion algebra. It is
//! implemented for `f32`, `f64` and for exact rationals, so every index-sum
//! identity can be checked without round-off. [`Real`] adds the
//! transcendental functions required by tube geometry and quadrature.

use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Ring-like scalar with exact or floating arithmetic.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `false` for NaN or infinite floating values; always `true` for exact types.
    fn is_finite_value(&self) -> bool;

    /// Converts a small non-negative count into the scalar type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl<I> Scalar for Ratio<I>
where
    I: Clone + Debug + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static,
    Ratio<I>: FromPrimitive + ToPrimitive,
{
    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Floating-point scalar used for anything involving trigonometry or quadrature.
pub trait Real: Scalar + Float + FloatConst + Copy {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier compensated accumulator.
///
/// For exact scalars the compensation term stays identically zero, so the
/// result equals the plain sum.
#[derive(Debug, Clone)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, value: T) {
        let t = self.sum.clone() + value.clone();
        if self.sum.abs() >= value.abs() {
            self.carry = self.carry.clone() + ((self.sum.clone() - t.clone()) + value);
        } else {
            self.carry = self.carry.clone() + ((value - t.clone()) + self.sum.clone());
        }
        self.sum = t;
    }

    pub fn total(&self) -> T {
        self.sum.clone() + self.carry.clone()
    }
}

impl<T: Scalar> Extend<T> for CompensatedSum<T> {
    fn extend<It: IntoIterator<Item = T>>(&mut self, iter: It) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Sums an iterator in its given order with Neumaier compensation.
pub fn compensated_sum<T: Scalar, It: IntoIterator<Item = T>>(iter: It) -> T {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn compensation_recovers_lost_low_bits() {
        let values = [1.0e16_f64, 1.0, -1.0e16, 1.0];
        let naive: f64 = values.iter().sum();
        assert_eq!(naive, 1.0);
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn exact_scalars_sum_exactly() {
        let v = (1..=10).map(|k| Rational64::new(1, k));
        let s = compensated_sum(v);
        assert_eq!(s, Rational64::new(7381, 2520));
    }

    #[test]
    fn finiteness() {
        assert!(!f64::NAN.is_finite_value());
        assert!(!f32::INFINITY.is_finite_value());
        assert!(Rational64::new(3, 7).is_finite_value());
    }
}
