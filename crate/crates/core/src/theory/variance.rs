use crate::error::Result;
use crate::scalar::Scalar;
use crate::theory::{EmptyBinDistribution, PairStats};

/// Variance of both resemblance estimators with their building blocks.
///
/// With `N = N_emp` and expectations over the empty-bin distribution:
///
/// ```text
/// A  = 2 E[N / (k - N + 1)]
/// B  = (k + 1) E[(k - N - 1) / (k - N + 1)]
/// A+ = E[N (4k - N + 1) / (2 (k - N + 1))]
/// B+ = E[(2k^3 + N^2 - N (2k^2 + 2k + 1) - 2k) / (2 (k - N + 1))]
///
/// var_old = R/k + A R/k   + B R R~ / k    - R^2
/// var_new = R/k + A+ R/k^2 + B+ R R~ / k^2 - R^2
/// gap     = E[N (N - 1) / (2 k^2 (k - N + 1))] (R - R R~)
/// ```
///
/// `var_old` is exact. `var_new` treats the `m = k - N = 1` configuration
/// like any other, although there both empty bins of a pair always borrow
/// from the single non-empty bin; `single_bin_correction` is the missing
/// term, so `var_new + single_bin_correction` is the exact variance. The
/// correction carries a factor `P(N = k - 1)`, negligible unless the union
/// is tiny compared to `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceBreakdown<T> {
    pub a: T,
    pub b: T,
    pub a_plus: T,
    pub b_plus: T,
    pub var_old: T,
    pub var_new: T,
    pub gap: T,
    pub single_bin_correction: T,
}

impl<T: Scalar> VarianceBreakdown<T> {
    /// Evaluates every quantity with the occupancy-recursion distribution.
    pub fn compute(ps: &PairStats) -> Result<Self> {
        let pmf = EmptyBinDistribution::<T>::occupancy(ps)?;
        Ok(Self::from_pmf(ps, &pmf))
    }

    pub fn from_pmf(ps: &PairStats, pmf: &EmptyBinDistribution<T>) -> Self {
        let k = ps.bins;
        let kt = T::from_count(k);
        let k2 = kt.clone() * kt.clone();
        let two = T::from_count(2);
        let r: T = ps.resemblance();
        let rr = r.clone() * ps.resemblance_tilde::<T>();
        // k - N + 1 >= 1 for every N in 0..=k.
        let denom = |n: u64| T::from_count(k - n + 1);

        let a = two.clone() * pmf.expect(|n| T::from_count(n) / denom(n));
        let b = T::from_count(k + 1)
            * pmf.expect(|n| {
                // k - N - 1 is -1 when every bin is empty, which has zero mass.
                (T::from_count(k) - T::from_count(n) - T::one()) / denom(n)
            });
        let a_plus = pmf.expect(|n| {
            T::from_count(n) * T::from_count(4 * k - n + 1) / (two.clone() * denom(n))
        });
        let b_plus = pmf.expect(|n| {
            let nt = T::from_count(n);
            let num = T::from_count(2 * k * k * k) + nt.clone() * nt.clone()
                - nt * T::from_count(2 * k * k + 2 * k + 1)
                - T::from_count(2 * k);
            num / (two.clone() * denom(n))
        });
        let r2 = r.clone() * r.clone();
        let var_old = r.clone() / kt.clone() + a.clone() * r.clone() / kt.clone()
            + b.clone() * rr.clone() / kt.clone()
            - r2.clone();
        let var_new = r.clone() / kt.clone() + a_plus.clone() * r.clone() / k2.clone()
            + b_plus.clone() * rr.clone() / k2.clone()
            - r2;
        let spread = r - rr;
        let gap = pmf.expect(|n| {
            if n < 2 {
                return T::zero();
            }
            T::from_count(n * (n - 1)) / (two.clone() * k2.clone() * denom(n))
        }) * spread.clone();
        let single_bin_correction = if k >= 3 {
            pmf.probs()[(k - 1) as usize].clone() * T::from_count((k - 1) * (k - 2))
                / (T::from_count(4) * k2)
                * spread
        } else {
            T::zero()
        };
        Self {
            a,
            b,
            a_plus,
            b_plus,
            var_old,
            var_new,
            gap,
            single_bin_correction,
        }
    }

    /// Exact variance of the bidirectional estimator, including `m = 1`.
    pub fn var_new_exact(&self) -> T {
        self.var_new.clone() + self.single_bin_correction.clone()
    }
}

/// Variance of the rotation-densified estimator.
pub fn variance_rotation(ps: &PairStats) -> Result<f64> {
    Ok(VarianceBreakdown::<f64>::compute(ps)?.var_old)
}

/// Variance of the bidirectional estimator, `m = 1` term treated like the
/// rest (see [`VarianceBreakdown`]).
pub fn variance_bidirectional(ps: &PairStats) -> Result<f64> {
    Ok(VarianceBreakdown::<f64>::compute(ps)?.var_new)
}

/// `Var(rotation) - Var(bidirectional)` from its own closed form.
pub fn variance_gap(ps: &PairStats) -> Result<f64> {
    Ok(VarianceBreakdown::<f64>::compute(ps)?.gap)
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::Rational;

    fn ps(f1: u64, f2: u64, a: u64, d: u64, k: u64) -> PairStats {
        PairStats::new(f1, f2, a, d, k).unwrap()
    }

    #[test]
    fn identical_sets_have_zero_variance() {
        for stats in [ps(5, 5, 5, 64, 8), ps(40, 40, 40, 1024, 64), ps(1, 1, 1, 16, 4)] {
            let v = VarianceBreakdown::<Rational>::compute(&stats).unwrap();
            assert!(v.var_old.is_zero());
            assert!(v.var_new.is_zero());
            assert!(v.gap.is_zero());
            assert!(v.var_new_exact().is_zero());
        }
    }

    #[test]
    fn disjoint_sets_have_zero_variance() {
        let v = VarianceBreakdown::<Rational>::compute(&ps(6, 4, 0, 120, 12)).unwrap();
        assert!(v.var_old.is_zero());
        assert!(v.var_new.is_zero());
        assert!(variance_rotation(&ps(6, 4, 0, 120, 12)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn no_empty_bins_means_no_gap() {
        // k = 1: the single bin is never empty.
        let stats = ps(30, 30, 10, 1000, 1);
        let v = VarianceBreakdown::<Rational>::compute(&stats).unwrap();
        assert!(v.gap.is_zero());
        assert_eq!(v.var_old, v.var_new);
        let r: Rational = stats.resemblance();
        assert_eq!(v.var_old, r.clone() - r.clone() * r);
    }

    #[test]
    fn gap_is_exact_difference() {
        for stats in [ps(6, 6, 3, 24, 6), ps(20, 20, 10, 10000, 500), ps(3, 5, 2, 40, 8)] {
            let v = VarianceBreakdown::<Rational>::compute(&stats).unwrap();
            assert_eq!(v.var_old.clone() - v.var_new.clone(), v.gap);
            assert!(v.gap > Rational::zero());
        }
    }

    #[test]
    fn sparse_pair_gap_in_f64() {
        let stats = ps(20, 20, 10, 10000, 500);
        let (old, new, gap) = (
            variance_rotation(&stats).unwrap(),
            variance_bidirectional(&stats).unwrap(),
            variance_gap(&stats).unwrap(),
        );
        assert!(gap > 0.0);
        assert!(((old - new) - gap).abs() <= 1e-10 * gap);
    }

    #[test]
    fn single_bin_correction_sign() {
        let v = VarianceBreakdown::<Rational>::compute(&ps(2, 1, 1, 30, 5)).unwrap();
        assert!(v.single_bin_correction > Rational::zero());
        let v = VarianceBreakdown::<Rational>::compute(&ps(2, 1, 1, 30, 2)).unwrap();
        assert!(v.single_bin_correction.is_zero());
    }
}
