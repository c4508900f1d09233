//! Scalar abstraction for rates, percentages and saliences.
//!
//! Counts are always integers; anything derived from a ratio of counts is
//! computed in a [`Scalar`], so the same code runs on `f32`, `f64` or exact
//! rationals ([`num_rational::Rational64`]). The exact instantiation is what
//! the test-suite oracles compare against.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num + Copy + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lossless for integers up to 2^53 on `f64`, 2^24 on `f32`, 2^63 on rationals.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    fn hundred() -> Self {
        Self::from_count(100)
    }

    /// `100 * part / whole`, or zero when `whole == 0`.
    fn percentage(part: u64, whole: u64) -> Self {
        if whole == 0 {
            return Self::zero();
        }
        Self::hundred() * Self::from_count(part) / Self::from_count(whole)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for Ratio<i64> {}
impl Scalar for Ratio<i128> {}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn percentage_of_zero_whole_is_zero() {
        assert_eq!(f64::percentage(3, 0), 0.0);
        assert_eq!(Rational64::percentage(3, 0), Rational64::from_integer(0));
    }

    #[test]
    fn exact_percentages_sum_to_hundred() {
        let parts = [1u64, 2, 4];
        let sum: Rational64 = parts.iter().map(|&p| Rational64::percentage(p, 7)).sum();
        assert_eq!(sum, Rational64::from_integer(100));
    }

    #[test]
    fn float_percentage_matches_direct_formula() {
        assert_eq!(f64::percentage(3, 4), 75.0);
        assert_eq!(f32::percentage(1, 4), 25.0);
    }
}
