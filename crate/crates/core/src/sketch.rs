//! One permutation hashing: a single permutation, `k` equal bins, one
//! minimum per bin.

use crate::cost::{CostCounters, Tally};
use crate::error::{config, Result};
use crate::permutation::{check_domain, Permutation};
use crate::set::SparseBinarySet;
use crate::universe::UniverseParams;

/// Content of one OPH bin: `None` for an empty bin, otherwise the bin
/// minimum reduced modulo `D/k`.
pub type BinValue = Option<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OphSketch {
    bins: Vec<BinValue>,
}

impl OphSketch {
    /// Wraps raw bins, checking every value is below `bin_width`.
    pub fn from_bins(bins: Vec<BinValue>, bin_width: u32) -> Result<Self> {
        if bins.is_empty() {
            return Err(config("sketch needs at least one bin"));
        }
        if let Some(v) = bins.iter().flatten().find(|&&v| v >= bin_width) {
            return Err(config(format!("bin value {v} not below bin width {bin_width}")));
        }
        Ok(Self { bins })
    }

    pub fn bins(&self) -> &[BinValue] {
        &self.bins
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn empty_bins(&self) -> usize {
        self.bins.iter().filter(|b| b.is_none()).count()
    }

    pub fn all_empty(&self) -> bool {
        self.bins.iter().all(Option::is_none)
    }
}

/// Bins `π(S)` into `k` ranges `[jD/k, (j+1)D/k)` and keeps each minimum
/// modulo `D/k`. Costs `O(d + k)`.
pub fn oph_sketch<P: Permutation + ?Sized>(
    s: &SparseBinarySet,
    perm: &P,
    u: &UniverseParams,
) -> Result<OphSketch> {
    oph_sketch_with(s, perm, u, &mut ())
}

pub fn oph_sketch_counted<P: Permutation + ?Sized>(
    s: &SparseBinarySet,
    perm: &P,
    u: &UniverseParams,
    counters: &mut CostCounters,
) -> Result<OphSketch> {
    oph_sketch_with(s, perm, u, counters)
}

pub(crate) fn oph_sketch_with<P: Permutation + ?Sized, T: Tally>(
    s: &SparseBinarySet,
    perm: &P,
    u: &UniverseParams,
    tally: &mut T,
) -> Result<OphSketch> {
    if perm.universe() != u.universe() {
        return Err(config(format!(
            "permutation universe {} differs from padded universe {}",
            perm.universe(),
            u.universe()
        )));
    }
    if s.universe() < u.requested_universe() || s.universe() > u.universe() {
        return Err(config(format!(
            "set universe {} incompatible with universe {} (padded {})",
            s.universe(),
            u.requested_universe(),
            u.universe()
        )));
    }
    check_domain(s, perm)?;

    let width = u.bin_width();
    let mut bins: Vec<BinValue> = vec![None; u.bins() as usize];
    tally.initialized(bins.len() as u64);
    for &x in s.indices() {
        tally.permuted();
        let y = perm.apply(x);
        let (bin, value) = ((y / width) as usize, y % width);
        let slot = &mut bins[bin];
        *slot = Some(slot.map_or(value, |cur| cur.min(value)));
    }
    Ok(OphSketch { bins })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// A D = 24, k = 6 two-set configuration used across tests:
    /// `S1` has bins 0 and 2 empty, `S2` has bins 0, 2 and 5 empty, bin 3 of
    /// `S1` holds 2, bin 5 of `S1` and bin 1 of `S2` hold 1, and bin 4 of
    /// `S2` holds 0. Remaining values are arbitrary. Use with the identity
    /// permutation.
    pub fn worked_pair() -> (SparseBinarySet, SparseBinarySet) {
        let s1 = SparseBinarySet::new(24, vec![4, 6, 14, 19, 21]).unwrap();
        let s2 = SparseBinarySet::new(24, vec![5, 14, 16, 18]).unwrap();
        (s1, s2)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::worked_pair;
    use super::*;
    use crate::permutation::SeededPermutation;

    fn sketch(d: u32, k: u32, xs: &[u32]) -> OphSketch {
        let u = UniverseParams::new(d, k).unwrap();
        let s = SparseBinarySet::new(d, xs.to_vec()).unwrap();
        oph_sketch(&s, &SeededPermutation::identity(u.universe()), &u).unwrap()
    }

    #[test]
    fn identity_binning() {
        assert_eq!(sketch(12, 3, &[0, 5, 9]).bins(), &[Some(0), Some(1), Some(1)]);
        assert_eq!(sketch(12, 3, &[1]).bins(), &[Some(1), None, None]);
    }

    #[test]
    fn keeps_bin_minimum() {
        assert_eq!(sketch(12, 3, &[7, 6, 5]).bins(), &[None, Some(1), None]);
    }

    #[test]
    fn worked_configuration() {
        let (s1, s2) = worked_pair();
        let u = UniverseParams::new(24, 6).unwrap();
        let id = SeededPermutation::identity(24);
        let a = oph_sketch(&s1, &id, &u).unwrap();
        let b = oph_sketch(&s2, &id, &u).unwrap();
        let empty = |sk: &OphSketch| -> Vec<usize> {
            (0..6).filter(|&j| sk.bins()[j].is_none()).collect()
        };
        assert_eq!(empty(&a), vec![0, 2]);
        assert_eq!(empty(&b), vec![0, 2, 5]);
        let both: Vec<bool> = (0..6)
            .map(|j| a.bins()[j].is_none() && b.bins()[j].is_none())
            .collect();
        assert_eq!(both, vec![true, false, true, false, false, false]);
    }

    #[test]
    fn empty_set_gives_all_empty_bins() {
        let sk = sketch(12, 4, &[]);
        assert!(sk.all_empty());
        assert_eq!(sk.len(), 4);
    }

    #[test]
    fn padded_universe_accepts_original_sets() {
        let u = UniverseParams::new(10, 4).unwrap();
        let s = SparseBinarySet::new(10, vec![9]).unwrap();
        let perm = SeededPermutation::new(1, u.universe()).unwrap();
        let sk = oph_sketch(&s, &perm, &u).unwrap();
        assert_eq!(sk.len(), 4);
        assert_eq!(sk.empty_bins(), 3);
        let wrong = SeededPermutation::new(1, 10).unwrap();
        assert!(oph_sketch(&s, &wrong, &u).is_err());
    }

    #[test]
    fn counters_track_d_and_k() {
        let u = UniverseParams::new(64, 8).unwrap();
        let s = SparseBinarySet::new(64, vec![1, 2, 3, 40]).unwrap();
        let mut c = CostCounters::default();
        oph_sketch_counted(&s, &SeededPermutation::new(5, 64).unwrap(), &u, &mut c).unwrap();
        assert_eq!(c.elements_permuted, 4);
        assert_eq!(c.bins_initialized, 8);
        assert_eq!(c.bin_visits, 0);
    }

    #[test]
    fn from_bins_validates_width() {
        assert!(OphSketch::from_bins(vec![Some(4)], 4).is_err());
        assert!(OphSketch::from_bins(vec![], 4).is_err());
        assert!(OphSketch::from_bins(vec![None, Some(3)], 4).is_ok());
    }
}
