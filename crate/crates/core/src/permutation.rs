//! Random permutations of the feature universe.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{config, Error, Result};
use crate::set::SparseBinarySet;

/// A bijection on `[0, D)`, possibly only evaluable on a prefix `[0, domain)`.
pub trait Permutation: Send + Sync {
    /// `D`, the size of the codomain.
    fn universe(&self) -> u32;

    /// Inputs below this bound may be passed to [`Permutation::apply`].
    fn domain(&self) -> u32 {
        self.universe()
    }

    /// `π(x)`. Callers must keep `x < self.domain()`.
    fn apply(&self, x: u32) -> u32;
}

/// A materialized permutation drawn by a seeded Fisher–Yates shuffle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededPermutation {
    seed: Option<u64>,
    mapping: Vec<u32>,
}

impl SeededPermutation {
    /// Largest universe materialized without an explicit cap.
    pub const DEFAULT_CAP: u32 = 1 << 28;

    pub fn new(seed: u64, universe: u32) -> Result<Self> {
        Self::with_cap(seed, universe, Self::DEFAULT_CAP)
    }

    pub fn with_cap(seed: u64, universe: u32, cap: u32) -> Result<Self> {
        if universe > cap {
            return Err(config(format!(
                "universe {universe} exceeds permutation materialization cap {cap}"
            )));
        }
        let mut mapping: Vec<u32> = (0..universe).collect();
        mapping.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Ok(Self {
            seed: Some(seed),
            mapping,
        })
    }

    pub fn identity(universe: u32) -> Self {
        Self {
            seed: None,
            mapping: (0..universe).collect(),
        }
    }

    /// Wraps an explicit mapping `x -> mapping[x]`, checking it is a bijection.
    pub fn from_mapping(mapping: Vec<u32>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &y in &mapping {
            let slot = seen
                .get_mut(y as usize)
                .ok_or_else(|| config(format!("image {y} outside [0, {n})")))?;
            if std::mem::replace(slot, true) {
                return Err(config(format!("image {y} appears twice")));
            }
        }
        Ok(Self {
            seed: None,
            mapping,
        })
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn mapping(&self) -> &[u32] {
        &self.mapping
    }
}

impl Permutation for SeededPermutation {
    fn universe(&self) -> u32 {
        self.mapping.len() as u32
    }

    #[inline]
    fn apply(&self, x: u32) -> u32 {
        self.mapping[x as usize]
    }
}

/// The images of `[0, n)` under a uniformly random permutation of `[0, D)`.
///
/// Distributionally identical to restricting a [`SeededPermutation`] to the
/// prefix, but costs `O(n)` instead of `O(D)`. Monte Carlo oracles place the
/// union of a synthetic pair on the prefix and draw one of these per trial.
#[derive(Debug, Clone)]
pub struct PrefixPermutation {
    universe: u32,
    images: Vec<u32>,
}

impl PrefixPermutation {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, universe: u32, n: u32) -> Result<Self> {
        if n > universe {
            return Err(config(format!("prefix {n} longer than universe {universe}")));
        }
        let images = rand::seq::index::sample(rng, universe as usize, n as usize)
            .into_iter()
            .map(|i| i as u32)
            .collect();
        Ok(Self { universe, images })
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }
}

impl Permutation for PrefixPermutation {
    fn universe(&self) -> u32 {
        self.universe
    }

    fn domain(&self) -> u32 {
        self.images.len() as u32
    }

    #[inline]
    fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }
}

/// Classic minwise hash `min π(S)`.
pub fn minwise_hash<P: Permutation + ?Sized>(s: &SparseBinarySet, perm: &P) -> Result<u32> {
    check_domain(s, perm)?;
    s.indices()
        .iter()
        .map(|&x| perm.apply(x))
        .min()
        .ok_or(Error::EmptyInput("minwise hash of an empty set"))
}

pub(crate) fn check_domain<P: Permutation + ?Sized>(s: &SparseBinarySet, perm: &P) -> Result<()> {
    if s.universe() > perm.universe() {
        return Err(config(format!(
            "set universe {} larger than permutation universe {}",
            s.universe(),
            perm.universe()
        )));
    }
    if s.indices().last().is_some_and(|&m| m >= perm.domain()) {
        return Err(config(format!(
            "set element outside permutation domain [0, {})",
            perm.domain()
        )));
    }
    Ok(())
}
