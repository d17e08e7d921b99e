use crate::error::{config, Result};
use crate::scalar::Scalar;
use crate::set::SparseBinarySet;
use crate::universe::UniverseParams;

/// Sizes of a pair of sets and the OPH configuration they are hashed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairStats {
    pub f1: u64,
    pub f2: u64,
    pub a: u64,
    pub universe: u64,
    pub bins: u64,
}

impl PairStats {
    /// Checks `a <= min(f1, f2)`, `f1 + f2 - a <= D` and `k | D`.
    pub fn new(f1: u64, f2: u64, a: u64, universe: u64, bins: u64) -> Result<Self> {
        if a > f1.min(f2) {
            return Err(config(format!("intersection {a} exceeds min({f1}, {f2})")));
        }
        if bins == 0 || universe % bins != 0 {
            return Err(config(format!(
                "universe {universe} is not a positive multiple of k = {bins}"
            )));
        }
        if f1 + f2 - a > universe {
            return Err(config(format!(
                "union {} does not fit in universe {universe}",
                f1 + f2 - a
            )));
        }
        Ok(Self {
            f1,
            f2,
            a,
            universe,
            bins,
        })
    }

    pub fn with_universe(f1: u64, f2: u64, a: u64, u: &UniverseParams) -> Result<Self> {
        Self::new(f1, f2, a, u.universe() as u64, u.bins() as u64)
    }

    pub fn from_sets(s1: &SparseBinarySet, s2: &SparseBinarySet, u: &UniverseParams) -> Result<Self> {
        let a = s1.intersection_size(s2) as u64;
        Self::with_universe(s1.len() as u64, s2.len() as u64, a, u)
    }

    /// Same pair, different bin count (universe unchanged).
    pub fn with_bins(&self, bins: u64) -> Result<Self> {
        Self::new(self.f1, self.f2, self.a, self.universe, bins)
    }

    pub fn union(&self) -> u64 {
        self.f1 + self.f2 - self.a
    }

    pub fn bin_width(&self) -> u64 {
        self.universe / self.bins
    }

    /// `R = a / (f1 + f2 - a)`, with `R = 1` for an empty union.
    pub fn resemblance<T: Scalar>(&self) -> T {
        match self.union() {
            0 => T::one(),
            u => T::ratio(self.a, u),
        }
    }

    /// `R~ = (a - 1) / (f1 + f2 - a - 1)`: the chance a second, different
    /// union element is also shared given the first one is. Defined as 1
    /// when the union has a single element. Only `R * R~` is ever used, and
    /// it is 0 whenever `a = 0`.
    pub fn resemblance_tilde<T: Scalar>(&self) -> T {
        let u = self.union();
        if u <= 1 || self.a == 0 {
            return if self.a == 0 && u > 1 { T::zero() } else { T::one() };
        }
        T::ratio(self.a - 1, u - 1)
    }
}
