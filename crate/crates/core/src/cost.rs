/// Operation counters for the sketching pipeline.
///
/// `elements_permuted` grows with the number of nonzeros `d`; `bin_visits`
/// counts reads of OPH bins during densification and grows with `k` only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostCounters {
    pub elements_permuted: u64,
    pub bins_initialized: u64,
    pub bin_visits: u64,
    pub densify_passes: u64,
}

impl CostCounters {
    pub fn merge(&mut self, other: &CostCounters) {
        self.elements_permuted += other.elements_permuted;
        self.bins_initialized += other.bins_initialized;
        self.bin_visits += other.bin_visits;
        self.densify_passes += other.densify_passes;
    }
}

/// Sink for cost events; `()` discards them.
pub(crate) trait Tally {
    fn permuted(&mut self);
    fn initialized(&mut self, n: u64);
    fn visit(&mut self);
    fn pass(&mut self);
}

impl Tally for () {
    #[inline(always)]
    fn permuted(&mut self) {}
    #[inline(always)]
    fn initialized(&mut self, _: u64) {}
    #[inline(always)]
    fn visit(&mut self) {}
    #[inline(always)]
    fn pass(&mut self) {}
}

impl Tally for CostCounters {
    #[inline]
    fn permuted(&mut self) {
        self.elements_permuted += 1;
    }
    #[inline]
    fn initialized(&mut self, n: u64) {
        self.bins_initialized += n;
    }
    #[inline]
    fn visit(&mut self) {
        self.bin_visits += 1;
    }
    #[inline]
    fn pass(&mut self) {
        self.densify_passes += 1;
    }
}
