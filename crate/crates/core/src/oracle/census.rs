use rayon::prelude::*;

use crate::densify::Scheme;
use crate::error::{config, Error, Result};
use crate::family::HashFamily;
use crate::oracle::mse::{random_bits, synthetic_pair};
use crate::oracle::{chunks, reuse_probability, stream_rng, Moments};
use crate::permutation::PrefixPermutation;
use crate::theory::PairStats;
use crate::universe::UniverseParams;

/// Sampled pair-of-bins match statistics for trials with exactly `m`
/// simultaneously non-empty bins.
///
/// With `MN_j` = "bin j not simultaneously empty and matching" and `ME_j` =
/// "bin j simultaneously empty and matching", each trial contributes
/// `sum_{i != j} MN_i MN_j`, `sum_{i != j} (MN_i ME_j + ME_i MN_j)` and
/// `sum_{i != j} ME_i ME_j`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConditionalCensus {
    pub m: u64,
    pub nn: Moments,
    pub ne: Moments,
    pub ee: Moments,
    /// Ordered bin pairs by category, summed over trials:
    /// non-empty/non-empty, non-empty/empty, empty/non-empty, empty/empty.
    pub pair_counts: [u64; 4],
}

impl ConditionalCensus {
    pub fn trials(&self) -> u64 {
        self.nn.n
    }

    fn merge(&mut self, other: &ConditionalCensus) {
        self.nn.merge(&other.nn);
        self.ne.merge(&other.ne);
        self.ee.merge(&other.ee);
        for (a, b) in self.pair_counts.iter_mut().zip(other.pair_counts) {
            *a += b;
        }
    }
}

/// Closed-form conditional expectations of the three pair sums given `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaExpectations {
    /// `m (m - 1) R R~`
    pub nn: f64,
    /// `2 m (k - m) [R/m + (m - 1) R R~ / m]`
    pub ne: f64,
    /// `(k - m)(k - m - 1) [p R + (1 - p) R R~]`
    pub ee: f64,
    /// Reuse probability used for `ee`.
    pub p: f64,
}

impl LemmaExpectations {
    pub fn new(k: u64, m: u64, r: f64, rr: f64, p: f64) -> Self {
        let (kf, mf) = (k as f64, m as f64);
        let empty_pairs = (k - m) * (k - m).saturating_sub(1);
        Self {
            nn: mf * (mf - 1.0) * rr,
            ne: 2.0 * mf * (kf - mf) * (r / mf + (mf - 1.0) * rr / mf),
            ee: empty_pairs as f64 * (p * r + (1.0 - p) * rr),
            p,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchBreakdown {
    pub scheme: Scheme,
    pub stats: PairStats,
    pub seed: u64,
    /// Indexed by `m`, `0..=k`.
    pub by_m: Vec<ConditionalCensus>,
}

impl MatchBreakdown {
    pub fn trials(&self) -> u64 {
        self.by_m.iter().map(ConditionalCensus::trials).sum()
    }

    /// Expectations for `m` using the exact reuse probability of the scheme.
    pub fn expected(&self, m: u64) -> Result<LemmaExpectations> {
        let k = self.stats.bins;
        if m == 0 || m > k {
            return Err(config(format!("m = {m} outside 1..={k}")));
        }
        let p = reuse_probability(m as u32, self.scheme)?;
        let p = *p.numer() as f64 / *p.denom() as f64;
        Ok(LemmaExpectations::new(
            k,
            m,
            self.stats.resemblance(),
            self.stats.resemblance::<f64>() * self.stats.resemblance_tilde::<f64>(),
            p,
        ))
    }
}

/// Samples `trials` hash families for the synthetic pair described by `ps`
/// and tallies the three pair sums, bucketed by the observed `m`.
pub fn lemma_census(ps: &PairStats, trials: u64, scheme: Scheme, seed: u64) -> Result<MatchBreakdown> {
    if trials == 0 {
        return Err(config("at least one trial required"));
    }
    if ps.f1 == 0 || ps.f2 == 0 {
        return Err(Error::EmptyInput("both sets of the pair must be nonempty"));
    }
    let u = UniverseParams::new(ps.universe as u32, ps.bins as u32)?;
    let (s1, s2) = synthetic_pair(ps)?;
    let k = ps.bins as usize;

    let parts = chunks(trials)
        .into_par_iter()
        .map(|(stream, n)| -> Result<Vec<ConditionalCensus>> {
            let mut rng = stream_rng(seed, stream);
            let mut acc = vec![ConditionalCensus::default(); k + 1];
            for _ in 0..n {
                let perm = PrefixPermutation::sample(&mut rng, u.universe(), ps.union() as u32)?;
                let bits = random_bits(&mut rng, u.bins());
                let fam = HashFamily::from_parts(u, perm, bits, scheme)?;
                let (o1, o2) = (fam.oph(&s1)?, fam.oph(&s2)?);
                let (d1, d2) = (fam.densify_as(&o1, scheme)?, fam.densify_as(&o2, scheme)?);
                let (mut c_n, mut c_e, mut empty) = (0u64, 0u64, 0u64);
                for j in 0..k {
                    let both_empty = o1.bins()[j].is_none() && o2.bins()[j].is_none();
                    let hit = d1.values()[j] == d2.values()[j];
                    empty += both_empty as u64;
                    match (both_empty, hit) {
                        (false, true) => c_n += 1,
                        (true, true) => c_e += 1,
                        _ => {}
                    }
                }
                let m = k as u64 - empty;
                let e = empty;
                let cell = &mut acc[m as usize];
                cell.nn.push((c_n * c_n.saturating_sub(1)) as f64);
                cell.ne.push((2 * c_n * c_e) as f64);
                cell.ee.push((c_e * c_e.saturating_sub(1)) as f64);
                cell.pair_counts[0] += m * m.saturating_sub(1);
                cell.pair_counts[1] += m * e;
                cell.pair_counts[2] += e * m;
                cell.pair_counts[3] += e * e.saturating_sub(1);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut by_m: Vec<ConditionalCensus> = (0..=k as u64)
        .map(|m| ConditionalCensus {
            m,
            ..Default::default()
        })
        .collect();
    for part in &parts {
        for (dst, src) in by_m.iter_mut().zip(part) {
            dst.merge(src);
        }
    }
    Ok(MatchBreakdown {
        scheme,
        stats: *ps,
        seed,
        by_m,
    })
}
