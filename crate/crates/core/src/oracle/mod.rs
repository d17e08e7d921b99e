//! Verification oracles for the probabilistic claims about both schemes.
//!
//! Enumeration oracles walk every permutation (and every direction-bit
//! vector) of a tiny universe and return exact rationals. Sampling oracles
//! draw independent hash families from a seeded ChaCha stream per chunk of
//! trials, so results do not depend on thread scheduling, and report
//! standard errors alongside every mean.

mod census;
mod enumerate;
mod mse;
mod reuse;
mod stats;

pub use census::{lemma_census, ConditionalCensus, LemmaExpectations, MatchBreakdown};
pub use enumerate::{
    exact_collision_probability, exact_estimator_moments, CollisionCensus, ExactMoments,
    MAX_ENUM_BINS, MAX_ENUM_UNIVERSE,
};
pub use mse::{empirical_mse, empirical_mse_paired, synthetic_pair, MseEstimate};
pub use reuse::reuse_probability;
pub use stats::{stream_rng, Moments};

pub(crate) const TRIAL_CHUNK: u64 = 4096;

/// `(stream id, trial count)` for each chunk of `trials`.
pub(crate) fn chunks(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(TRIAL_CHUNK))
        .map(|c| (c, TRIAL_CHUNK.min(trials - c * TRIAL_CHUNK)))
        .collect()
}
