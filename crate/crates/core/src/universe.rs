use crate::error::{config, Result};

/// Universe size `D`, bin count `k` and the derived bin width and offset.
///
/// `D` is padded up to the next multiple of `k` with dummy features that no
/// set ever contains; the amount of padding is kept so callers can report it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UniverseParams {
    requested: u32,
    universe: u32,
    bins: u32,
    offset: u32,
}

impl UniverseParams {
    pub fn new(universe: u32, bins: u32) -> Result<Self> {
        if bins == 0 {
            return Err(config("bin count k must be at least 1"));
        }
        if universe < bins {
            return Err(config(format!(
                "universe size D = {universe} is smaller than bin count k = {bins}"
            )));
        }
        let padded = (universe as u64).div_ceil(bins as u64) * bins as u64;
        let width = padded / bins as u64;
        // Densified values stay below D + k - 1, which must fit in u32.
        if padded + bins as u64 > u32::MAX as u64 {
            return Err(config(format!(
                "universe {padded} with {bins} bins overflows 32-bit hash values"
            )));
        }
        Ok(Self {
            requested: universe,
            universe: padded as u32,
            bins,
            offset: width as u32 + 1,
        })
    }

    /// Padded universe size `D` (divisible by `k`).
    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Universe size as originally requested.
    pub fn requested_universe(&self) -> u32 {
        self.requested
    }

    /// Number of dummy features appended to make `D` divisible by `k`.
    pub fn padding(&self) -> u32 {
        self.universe - self.requested
    }

    pub fn bins(&self) -> u32 {
        self.bins
    }

    /// `D / k`.
    pub fn bin_width(&self) -> u32 {
        self.universe / self.bins
    }

    /// The offset constant `C = D/k + 1`.
    pub fn offset(&self) -> u32 {
        self.offset
    }

    /// Exclusive upper bound on any densified value: `D/k + (k-1) C`.
    pub fn value_bound(&self) -> u64 {
        self.bin_width() as u64 + (self.bins as u64 - 1) * self.offset as u64
    }

    /// Replaces the offset constant. Only meant for negative controls that
    /// demonstrate what breaks when `C` is too small.
    #[doc(hidden)]
    pub fn with_offset_override(mut self, offset: u32) -> Self {
        self.offset = offset;
        self
    }
}
