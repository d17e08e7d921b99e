//! Distribution of `N_emp`, the number of bins empty for both sets.
//!
//! Only the union matters: `u = f1 + f2 - a` distinct positions are drawn
//! without replacement from `D = k w` slots, and `N_emp` counts bins that
//! receive none. Three evaluations are provided:
//!
//! - [`EmptyBinDistribution::occupancy`] drops balls one at a time and tracks
//!   the number of occupied bins. Every update is a convex combination, so
//!   it is stable in floating point for any `k` and `u`. This is the
//!   default route.
//! - [`EmptyBinDistribution::inclusion_exclusion`] evaluates the classical
//!   alternating sum term by term. Exact over rationals; in floating point it
//!   cancels catastrophically once `k` and `u` are both in the hundreds.
//! - [`EmptyBinDistribution::inclusion_exclusion_log`] evaluates the same sum
//!   with log-magnitudes and compensated summation, and reports how badly
//!   conditioned the sum was.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::theory::PairStats;

/// `pmf[i] = P(N_emp = i)` for `i = 0..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmptyBinDistribution<T> {
    pmf: Vec<T>,
}

/// How trustworthy a floating-point inclusion–exclusion evaluation is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSumDiagnostics {
    /// Sum of the raw (unclamped) probabilities.
    pub raw_total: f64,
    /// Most negative raw probability (0 if none).
    pub min_raw: f64,
    /// `max_i sum_s |term| / |P_i|` over bins with non-negligible mass.
    pub condition: f64,
    /// Whether clamping or renormalization changed the result.
    pub adjusted: bool,
}

fn degenerate(ps: &PairStats) -> Result<()> {
    if ps.union() == 0 {
        return Err(Error::Degenerate(
            "union of the pair is empty; every bin is always empty".into(),
        ));
    }
    Ok(())
}

impl<T: Scalar> EmptyBinDistribution<T> {
    pub fn from_probs(pmf: Vec<T>) -> Self {
        Self { pmf }
    }

    pub fn probs(&self) -> &[T] {
        &self.pmf
    }

    /// `k`.
    pub fn bins(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn total(&self) -> T {
        self.pmf.iter().cloned().fold(T::zero(), |acc, p| acc + p)
    }

    /// `E[g(N_emp)]`.
    pub fn expect(&self, mut g: impl FnMut(u64) -> T) -> T {
        self.pmf
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .fold(T::zero(), |acc, (i, p)| acc + p.clone() * g(i as u64))
    }

    /// Converts probabilities to another scalar (via `f64` for floats,
    /// exactly for rational targets of float sources).
    pub fn convert<U: Scalar>(&self) -> EmptyBinDistribution<U> {
        EmptyBinDistribution {
            pmf: self
                .pmf
                .iter()
                .map(|p| U::from_f64(p.approx()).expect("finite probability"))
                .collect(),
        }
    }

    /// Sequential ball-dropping recursion over the number of occupied bins.
    /// Costs `O(u * min(u, k))` scalar operations.
    pub fn occupancy(ps: &PairStats) -> Result<Self> {
        degenerate(ps)?;
        let (k, w, d, u) = (ps.bins, ps.bin_width(), ps.universe, ps.union());
        let top = u.min(k) as usize;
        // occupied[j] = P(j bins occupied after t balls)
        let mut occupied: Vec<T> = vec![T::zero(); top + 1];
        occupied[0] = T::one();
        let mut next: Vec<T> = vec![T::zero(); top + 1];
        for t in 0..u {
            let free = d - t;
            next.iter_mut().for_each(|x| *x = T::zero());
            let reach = (t as usize).min(top);
            for j in 0..=reach {
                if occupied[j].is_zero() {
                    continue;
                }
                let p = occupied[j].clone();
                let stay = (j as u64 * w).saturating_sub(t);
                if stay > 0 {
                    next[j] = next[j].clone() + p.clone() * T::ratio(stay, free);
                }
                let fresh = (k - j as u64) * w;
                if fresh > 0 && j < top {
                    next[j + 1] = next[j + 1].clone() + p * T::ratio(fresh, free);
                }
            }
            std::mem::swap(&mut occupied, &mut next);
        }
        let mut pmf = vec![T::zero(); k as usize + 1];
        for (j, p) in occupied.into_iter().enumerate() {
            pmf[k as usize - j] = p;
        }
        Ok(Self { pmf })
    }

    /// `P_i = sum_s (-1)^s k!/(i! s! (k-i-s)!) prod_{t<u} (w(k-i-s) - t)/(D - t)`,
    /// evaluated directly in `T`.
    pub fn inclusion_exclusion(ps: &PairStats) -> Result<Self> {
        degenerate(ps)?;
        let k = ps.bins;
        let products: Vec<T> = (0..=k).map(|j| fill_product::<T>(ps, j)).collect();
        let pmf = (0..=k)
            .map(|i| {
                let lead = binomial::<T>(k, i);
                (0..=k - i).fold(T::zero(), |acc, s| {
                    let term = lead.clone() * binomial::<T>(k - i, s) * products[(i + s) as usize].clone();
                    if s % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                })
            })
            .collect();
        Ok(Self { pmf })
    }
}

/// `prod_{t<u} (w(k-j) - t)/(D - t)`: the chance that `j` given bins all
/// stay empty.
fn fill_product<T: Scalar>(ps: &PairStats, j: u64) -> T {
    let avail = ps.bin_width() * (ps.bins - j);
    if avail < ps.union() {
        return T::zero();
    }
    (0..ps.union()).fold(T::one(), |acc, t| acc * T::ratio(avail - t, ps.universe - t))
}

fn binomial<T: Scalar>(n: u64, r: u64) -> T {
    let r = r.min(n - r);
    (1..=r).fold(T::one(), |acc, l| acc * T::ratio(n - r + l, l))
}

impl EmptyBinDistribution<f64> {
    /// Inclusion–exclusion with terms carried as `(sign, ln|term|)` and
    /// combined by Neumaier summation after factoring out the largest
    /// magnitude. Negative roundoff is clamped to 0 and the result is
    /// renormalized when its total drifts from 1 by more than `1e-9`.
    pub fn inclusion_exclusion_log(ps: &PairStats) -> Result<(Self, LogSumDiagnostics)> {
        degenerate(ps)?;
        let k = ps.bins as usize;
        let ln_fact: Vec<f64> = std::iter::once(0.0)
            .chain((1..=k).scan(0.0, |acc, l| {
                *acc += (l as f64).ln();
                Some(*acc)
            }))
            .collect();
        let ln_choose = |n: usize, r: usize| ln_fact[n] - ln_fact[r] - ln_fact[n - r];
        let (w, d, u) = (ps.bin_width(), ps.universe, ps.union());
        let ln_products: Vec<Option<f64>> = (0..=k as u64)
            .map(|j| {
                let avail = w * (ps.bins - j);
                (avail >= u).then(|| {
                    (0..u)
                        .map(|t| ((avail - t) as f64).ln() - ((d - t) as f64).ln())
                        .sum()
                })
            })
            .collect();

        let mut pmf = Vec::with_capacity(k + 1);
        let mut condition: f64 = 1.0;
        let mut min_raw: f64 = 0.0;
        for i in 0..=k {
            let logs: Vec<(bool, f64)> = (0..=k - i)
                .filter_map(|s| {
                    ln_products[i + s].map(|lp| (s % 2 == 1, ln_choose(k, i) + ln_choose(k - i, s) + lp))
                })
                .collect();
            let Some(peak) = logs.iter().map(|&(_, l)| l).reduce(f64::max) else {
                pmf.push(0.0);
                continue;
            };
            let (mut sum, mut comp, mut abs) = (0.0f64, 0.0f64, 0.0f64);
            for &(neg, l) in &logs {
                let x = (l - peak).exp();
                abs += x;
                let x = if neg { -x } else { x };
                let t = sum + x;
                comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
                sum = t;
            }
            let scaled = (sum + comp) * peak.exp();
            if scaled.abs() > 1e-300 && peak.exp() * abs > 1e-12 {
                condition = condition.max(abs / (sum + comp).abs());
            }
            min_raw = min_raw.min(scaled);
            pmf.push(scaled);
        }
        let raw_total: f64 = pmf.iter().sum();
        let mut adjusted = min_raw < 0.0;
        for p in &mut pmf {
            *p = p.max(0.0);
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-9 && total > 0.0 {
            adjusted = true;
            pmf.iter_mut().for_each(|p| *p /= total);
        }
        Ok((
            Self { pmf },
            LogSumDiagnostics {
                raw_total,
                min_raw,
                condition,
                adjusted,
            },
        ))
    }
}

/// `P(N_emp = i)` for the pair, via the stable occupancy recursion.
pub fn empty_bin_pmf(ps: &PairStats) -> Result<EmptyBinDistribution<f64>> {
    EmptyBinDistribution::occupancy(ps)
}
