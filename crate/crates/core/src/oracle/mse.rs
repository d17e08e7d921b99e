use rand::Rng;
use rayon::prelude::*;

use crate::densify::{DirectionBits, Scheme};
use crate::error::{config, Error, Result};
use crate::family::HashFamily;
use crate::oracle::{chunks, stream_rng, Moments};
use crate::permutation::PrefixPermutation;
use crate::set::SparseBinarySet;
use crate::theory::{match_count, PairStats};
use crate::universe::UniverseParams;

/// Empirical mean squared error of one estimator over sampled hash families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseEstimate {
    pub scheme: Scheme,
    pub seed: u64,
    pub squared_error: Moments,
    pub estimate: Moments,
}

impl MseEstimate {
    pub fn trials(&self) -> u64 {
        self.squared_error.n
    }

    pub fn mse(&self) -> f64 {
        self.squared_error.mean()
    }

    pub fn std_error(&self) -> f64 {
        self.squared_error.std_error()
    }
}

/// The pair `S1 = [0, f1)`, `S2 = [f1 - a, f1 - a + f2)`, whose union is the
/// prefix `[0, f1 + f2 - a)` of the universe. Under a uniformly random
/// permutation the labels of the elements are irrelevant, so this realizes
/// any feasible `(f1, f2, a)`.
pub fn synthetic_pair(ps: &PairStats) -> Result<(SparseBinarySet, SparseBinarySet)> {
    let d = ps.universe as u32;
    let (f1, f2, a) = (ps.f1 as u32, ps.f2 as u32, ps.a as u32);
    let s1 = SparseBinarySet::from_sorted(d, (0..f1).collect())?;
    let s2 = SparseBinarySet::from_sorted(d, (f1 - a..f1 - a + f2).collect())?;
    Ok((s1, s2))
}

pub(crate) fn random_bits<R: Rng + ?Sized>(rng: &mut R, k: u32) -> DirectionBits {
    let mut bits = Vec::with_capacity(k as usize);
    while bits.len() < k as usize {
        let word: u64 = rng.gen();
        let take = (k as usize - bits.len()).min(64);
        bits.extend((0..take).map(|b| (word >> b) & 1 == 1));
    }
    DirectionBits::from_bits(bits)
}

/// Mean squared error of `R^` for each requested scheme. Every trial draws
/// one permutation and one set of direction bits, shared by all schemes,
/// so the schemes are compared on identical randomness.
fn run(ps: &PairStats, trials: u64, seed: u64, schemes: &[Scheme]) -> Result<Vec<MseEstimate>> {
    if trials == 0 {
        return Err(config("at least one trial required"));
    }
    if ps.f1 == 0 || ps.f2 == 0 {
        return Err(Error::EmptyInput("both sets of the pair must be nonempty"));
    }
    let u = UniverseParams::new(ps.universe as u32, ps.bins as u32)?;
    let (s1, s2) = synthetic_pair(ps)?;
    let truth: f64 = ps.resemblance();
    let k = u.bins() as f64;

    let parts = chunks(trials)
        .into_par_iter()
        .map(|(stream, n)| -> Result<Vec<(Moments, Moments)>> {
            let mut rng = stream_rng(seed, stream);
            let mut acc = vec![(Moments::default(), Moments::default()); schemes.len()];
            for _ in 0..n {
                let perm = PrefixPermutation::sample(&mut rng, u.universe(), ps.union() as u32)?;
                let bits = random_bits(&mut rng, u.bins());
                let fam = HashFamily::from_parts(u, perm, bits, Scheme::Rotation)?;
                let (o1, o2) = (fam.oph(&s1)?, fam.oph(&s2)?);
                for (slot, &scheme) in acc.iter_mut().zip(schemes) {
                    let hits = match_count(&fam.densify_as(&o1, scheme)?, &fam.densify_as(&o2, scheme)?)?;
                    let est = hits as f64 / k;
                    slot.0.push((est - truth) * (est - truth));
                    slot.1.push(est);
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(schemes
        .iter()
        .enumerate()
        .map(|(i, &scheme)| {
            let mut squared_error = Moments::default();
            let mut estimate = Moments::default();
            for part in &parts {
                squared_error.merge(&part[i].0);
                estimate.merge(&part[i].1);
            }
            MseEstimate {
                scheme,
                seed,
                squared_error,
                estimate,
            }
        })
        .collect())
}

/// Mean of `(R^ - R)^2` over `trials` independent hash families.
pub fn empirical_mse(ps: &PairStats, trials: u64, scheme: Scheme, seed: u64) -> Result<MseEstimate> {
    Ok(run(ps, trials, seed, &[scheme])?.remove(0))
}

/// Both schemes on the same sampled families: `[rotation, bidirectional]`.
pub fn empirical_mse_paired(ps: &PairStats, trials: u64, seed: u64) -> Result<[MseEstimate; 2]> {
    let v = run(ps, trials, seed, &Scheme::ALL)?;
    Ok([v[0], v[1]])
}
