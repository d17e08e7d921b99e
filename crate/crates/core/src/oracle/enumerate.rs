use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rayon::prelude::*;

use crate::densify::{densify_bidirectional, densify_rotation, DensifiedSketch, DirectionBits, Scheme};
use crate::error::{Error, Result};
use crate::permutation::SeededPermutation;
use crate::set::SparseBinarySet;
use crate::sketch::{oph_sketch, OphSketch};
use crate::universe::UniverseParams;

pub const MAX_ENUM_UNIVERSE: u32 = 8;
pub const MAX_ENUM_BINS: u32 = 8;

/// Per-bin collision counts over every configuration of a tiny universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionCensus {
    pub hits: Vec<u64>,
    pub configurations: u64,
    /// Bins empty in exactly one of the two OPH sketches whose densified
    /// values nevertheless agree. Must be zero for a correct offset.
    pub spurious: u64,
    pub exact: bool,
}

impl CollisionCensus {
    fn new(k: usize) -> Self {
        Self {
            hits: vec![0; k],
            configurations: 0,
            spurious: 0,
            exact: true,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.hits.iter_mut().zip(&other.hits).for_each(|(a, b)| *a += b);
        self.configurations += other.configurations;
        self.spurious += other.spurious;
        self
    }

    pub fn probability(&self, bin: usize) -> Ratio<u64> {
        Ratio::new(self.hits[bin], self.configurations)
    }

    pub fn probabilities(&self) -> Vec<Ratio<u64>> {
        (0..self.hits.len()).map(|j| self.probability(j)).collect()
    }
}

/// Sums of the match count `X = k R^` over every configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExactMoments {
    pub bins: u64,
    pub configurations: u64,
    pub sum: u64,
    pub sum_sq: u64,
}

impl ExactMoments {
    fn merge(mut self, other: Self) -> Self {
        self.configurations += other.configurations;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    /// `E[R^]`.
    pub fn mean(&self) -> BigRational {
        BigRational::new(BigInt::from(self.sum), BigInt::from(self.bins * self.configurations))
    }

    /// `Var(R^) = E[R^^2] - E[R^]^2`.
    pub fn variance(&self) -> BigRational {
        let second = BigRational::new(
            BigInt::from(self.sum_sq),
            BigInt::from(self.bins * self.bins * self.configurations),
        );
        let m = self.mean();
        second - m.clone() * m
    }
}

fn check_bounds(u: &UniverseParams) -> Result<()> {
    if u.universe() > MAX_ENUM_UNIVERSE {
        return Err(Error::EnumerationBound {
            what: "D",
            value: u.universe() as u64,
            max: MAX_ENUM_UNIVERSE as u64,
        });
    }
    if u.bins() > MAX_ENUM_BINS {
        return Err(Error::EnumerationBound {
            what: "k",
            value: u.bins() as u64,
            max: MAX_ENUM_BINS as u64,
        });
    }
    Ok(())
}

/// Folds `visit` over the OPH and densified sketches of both sets for every
/// permutation of `[0, D)` and, for the bidirectional scheme, every
/// direction-bit vector. Permutations are processed in parallel and the
/// partial results merged in permutation order.
fn fold_configurations<A, F, M>(
    s1: &SparseBinarySet,
    s2: &SparseBinarySet,
    u: &UniverseParams,
    scheme: Scheme,
    init: impl Fn() -> A + Sync + Send,
    visit: F,
    merge: M,
) -> Result<A>
where
    A: Send,
    F: Fn(&mut A, [&OphSketch; 2], [&DensifiedSketch; 2]) + Sync + Send,
    M: Fn(A, A) -> A,
{
    check_bounds(u)?;
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptyInput("enumeration needs two nonempty sets"));
    }
    let k = u.bins();
    let masks: Vec<u64> = match scheme {
        Scheme::Rotation => vec![0],
        Scheme::Bidirectional => (0..1u64 << k).collect(),
    };
    let perms: Vec<Vec<u32>> = (0..u.universe())
        .permutations(u.universe() as usize)
        .collect();
    let parts = perms
        .into_par_iter()
        .map(|p| -> Result<A> {
            let perm = SeededPermutation::from_mapping(p)?;
            let o1 = oph_sketch(s1, &perm, u)?;
            let o2 = oph_sketch(s2, &perm, u)?;
            let mut acc = init();
            for &mask in &masks {
                let (d1, d2) = match scheme {
                    Scheme::Rotation => (densify_rotation(&o1, u)?, densify_rotation(&o2, u)?),
                    Scheme::Bidirectional => {
                        let q = DirectionBits::from_mask(mask, k);
                        (
                            densify_bidirectional(&o1, &q, u)?,
                            densify_bidirectional(&o2, &q, u)?,
                        )
                    }
                };
                visit(&mut acc, [&o1, &o2], [&d1, &d2]);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<A>>>()?;
    Ok(parts.into_iter().fold(init(), merge))
}

/// Exact `P(H_j(S1) = H_j(S2))` for every bin `j`, by enumerating all `D!`
/// permutations (times `2^k` bit vectors for the bidirectional scheme).
/// Requires `D <= 8` and `k <= 8`.
pub fn exact_collision_probability(
    s1: &SparseBinarySet,
    s2: &SparseBinarySet,
    u: &UniverseParams,
    scheme: Scheme,
) -> Result<CollisionCensus> {
    let k = u.bins() as usize;
    fold_configurations(
        s1,
        s2,
        u,
        scheme,
        || CollisionCensus::new(k),
        |acc, [o1, o2], [d1, d2]| {
            acc.configurations += 1;
            for j in 0..k {
                let hit = d1.values()[j] == d2.values()[j];
                acc.hits[j] += hit as u64;
                let one_sided = o1.bins()[j].is_none() != o2.bins()[j].is_none();
                acc.spurious += (hit && one_sided) as u64;
            }
        },
        CollisionCensus::merge,
    )
}

/// Exact first and second moments of the match count, by the same
/// enumeration as [`exact_collision_probability`].
pub fn exact_estimator_moments(
    s1: &SparseBinarySet,
    s2: &SparseBinarySet,
    u: &UniverseParams,
    scheme: Scheme,
) -> Result<ExactMoments> {
    let bins = u.bins() as u64;
    fold_configurations(
        s1,
        s2,
        u,
        scheme,
        || ExactMoments {
            bins,
            ..Default::default()
        },
        |acc, _, [d1, d2]| {
            let x = d1
                .values()
                .iter()
                .zip(d2.values())
                .filter(|(a, b)| a == b)
                .count() as u64;
            acc.configurations += 1;
            acc.sum += x;
            acc.sum_sq += x * x;
        },
        ExactMoments::merge,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(d: u32, xs: &[u32]) -> SparseBinarySet {
        SparseBinarySet::new(d, xs.to_vec()).unwrap()
    }

    #[test]
    fn small_pair_both_schemes() {
        let u = UniverseParams::new(4, 2).unwrap();
        for scheme in Scheme::ALL {
            let c = exact_collision_probability(&set(4, &[0, 1]), &set(4, &[1, 2]), &u, scheme)
                .unwrap();
            assert!(c.exact);
            assert_eq!(c.probabilities(), vec![Ratio::new(1, 3); 2]);
            assert_eq!(c.spurious, 0);
        }
    }

    #[test]
    fn identical_and_disjoint() {
        let u = UniverseParams::new(6, 3).unwrap();
        let s = set(6, &[0, 4]);
        let t = set(6, &[1, 2, 5]);
        for scheme in Scheme::ALL {
            let same = exact_collision_probability(&s, &s, &u, scheme).unwrap();
            assert!(same.probabilities().iter().all(|p| *p == Ratio::from_integer(1)));
            let apart = exact_collision_probability(&s, &t, &u, scheme).unwrap();
            assert!(apart.hits.iter().all(|&h| h == 0));
        }
    }

    #[test]
    fn bounds() {
        let u = UniverseParams::new(9, 3).unwrap();
        let s = set(9, &[1]);
        assert!(matches!(
            exact_collision_probability(&s, &s, &u, Scheme::Rotation),
            Err(Error::EnumerationBound { what: "D", .. })
        ));
        let u = UniverseParams::new(4, 2).unwrap();
        assert!(matches!(
            exact_collision_probability(&SparseBinarySet::empty(4), &set(4, &[1]), &u, Scheme::Rotation),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn zero_offset_breaks_alignment() {
        let u = UniverseParams::new(6, 3).unwrap().with_offset_override(0);
        let c = exact_collision_probability(&set(6, &[0, 1]), &set(6, &[1, 2]), &u, Scheme::Rotation)
            .unwrap();
        assert!(c.spurious > 0);
        assert!(c.probabilities().iter().any(|p| *p != Ratio::new(1, 3)));
    }

    #[test]
    fn moments_mean_is_resemblance() {
        let u = UniverseParams::new(6, 3).unwrap();
        for scheme in Scheme::ALL {
            let m = exact_estimator_moments(&set(6, &[0, 1, 2]), &set(6, &[2, 3]), &u, scheme)
                .unwrap();
            assert_eq!(m.mean(), BigRational::new(1.into(), 4.into()));
        }
    }
}
