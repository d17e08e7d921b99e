use num_rational::Ratio;

use crate::error::{config, Error, Result};

/// A binary vector over `[0, D)` stored as its strictly increasing support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseBinarySet {
    universe: u32,
    indices: Vec<u32>,
}

impl SparseBinarySet {
    /// Builds a set from arbitrary indices; duplicates are merged.
    pub fn new(universe: u32, mut indices: Vec<u32>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&max) = indices.last() {
            if max >= universe {
                return Err(config(format!(
                    "index {max} out of range for universe of size {universe}"
                )));
            }
        }
        Ok(Self { universe, indices })
    }

    /// Builds a set from indices already sorted and deduplicated.
    pub fn from_sorted(universe: u32, indices: Vec<u32>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config("indices are not strictly increasing"));
        }
        if indices.last().is_some_and(|&m| m >= universe) {
            return Err(config("index out of range"));
        }
        Ok(Self { universe, indices })
    }

    pub fn empty(universe: u32) -> Self {
        Self {
            universe,
            indices: Vec::new(),
        }
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.indices.binary_search(&x).is_ok()
    }

    /// Reinterprets the set over a larger universe (e.g. after padding).
    pub fn with_universe(mut self, universe: u32) -> Result<Self> {
        if self.indices.last().is_some_and(|&m| m >= universe) {
            return Err(config("cannot shrink universe below the largest index"));
        }
        self.universe = universe;
        Ok(self)
    }

    /// `|self ∩ other|` by a linear merge.
    pub fn intersection_size(&self, other: &Self) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        let (a, b) = (&self.indices, &other.indices);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

/// Exact resemblance `|S1 ∩ S2| / |S1 ∪ S2|`, with `R(∅, ∅) = 1`.
pub fn resemblance_exact(s1: &SparseBinarySet, s2: &SparseBinarySet) -> Result<Ratio<u64>> {
    if s1.universe() != s2.universe() {
        return Err(Error::Config(format!(
            "sets live in different universes ({} vs {})",
            s1.universe(),
            s2.universe()
        )));
    }
    let inter = s1.intersection_size(s2) as u64;
    let union = (s1.len() + s2.len()) as u64 - inter;
    if union == 0 {
        return Ok(Ratio::from_integer(1));
    }
    Ok(Ratio::new(inter, union))
}
