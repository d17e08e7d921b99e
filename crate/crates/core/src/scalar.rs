//! Scalar abstraction shared by the theory formulas.
//!
//! Every closed form in [`crate::theory`] only needs field arithmetic, so it
//! is written once against [`Scalar`] and evaluated either in floating point
//! (`f32`, `f64`) or exactly over [`BigRational`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lifts a count into the scalar type. Counts in this crate always fit.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// `num / den` evaluated in the scalar type.
    fn ratio(num: u64, den: u64) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }

    /// Lossy view used for reporting.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Whether arithmetic in this type is exact (no roundoff).
    fn is_exact() -> bool;
}

impl Scalar for f32 {
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f64 {
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_exact() -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_exact_for_rationals() {
        let third = <BigRational as Scalar>::ratio(1, 3);
        let sum = third.clone() + third.clone() + third;
        assert_eq!(sum, BigRational::from_count(1));
        assert!((f64::ratio(1, 3) - 1.0 / 3.0).abs() < 1e-16);
        assert!((<BigRational as Scalar>::ratio(2, 8).approx() - 0.25).abs() < 1e-16);
    }
}
