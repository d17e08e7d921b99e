//! Filling empty OPH bins so every bin yields a valid LSH hash.
//!
//! Both schemes copy the value of the nearest non-empty bin at circular
//! distance `t` and add `t * C`. [`Scheme::Rotation`] always searches to the
//! right; [`Scheme::Bidirectional`] searches left or right according to a
//! per-bin direction bit that is fixed for the whole hash family. Rotation
//! reads every bin once, bidirectional reads every bin twice (one pass in
//! each direction); wrap-around bins are resolved from the extremal
//! non-empty bins without further reads.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{CostCounters, Tally};
use crate::error::{config, Error, Result};
use crate::sketch::OphSketch;
use crate::universe::UniverseParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Rotation,
    Bidirectional,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Rotation, Scheme::Bidirectional];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Rotation => "rotation",
            Scheme::Bidirectional => "bidirectional",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation" => Ok(Scheme::Rotation),
            "bidirectional" => Ok(Scheme::Bidirectional),
            other => Err(config(format!("unknown scheme '{other}'"))),
        }
    }
}

/// One direction bit per bin: `false` searches circular left, `true` right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectionBits {
    seed: Option<u64>,
    bits: Vec<bool>,
}

impl DirectionBits {
    /// Draws `k` fair bits from their own seeded stream.
    pub fn new(seed: u64, k: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = (0..k).map(|_| rng.gen::<bool>()).collect();
        Self {
            seed: Some(seed),
            bits,
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { seed: None, bits }
    }

    /// The `k` bits given by the low bits of `mask` (bit `j` = bin `j`).
    pub fn from_mask(mask: u64, k: u32) -> Self {
        Self::from_bits((0..k).map(|j| (mask >> j) & 1 == 1).collect())
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// `k` hash values with no empty entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensifiedSketch {
    values: Vec<u32>,
    scheme: Scheme,
}

impl DensifiedSketch {
    pub fn new(values: Vec<u32>, scheme: Scheme) -> Self {
        Self { values, scheme }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn densify_rotation(sk: &OphSketch, u: &UniverseParams) -> Result<DensifiedSketch> {
    rotation_with(sk, u, &mut ())
}

pub fn densify_rotation_counted(
    sk: &OphSketch,
    u: &UniverseParams,
    counters: &mut CostCounters,
) -> Result<DensifiedSketch> {
    rotation_with(sk, u, counters)
}

pub fn densify_bidirectional(
    sk: &OphSketch,
    q: &DirectionBits,
    u: &UniverseParams,
) -> Result<DensifiedSketch> {
    bidirectional_with(sk, q, u, &mut ())
}

pub fn densify_bidirectional_counted(
    sk: &OphSketch,
    q: &DirectionBits,
    u: &UniverseParams,
    counters: &mut CostCounters,
) -> Result<DensifiedSketch> {
    bidirectional_with(sk, q, u, counters)
}

fn check_len(sk: &OphSketch, u: &UniverseParams) -> Result<()> {
    if sk.len() != u.bins() as usize {
        return Err(config(format!(
            "sketch has {} bins, universe expects {}",
            sk.len(),
            u.bins()
        )));
    }
    Ok(())
}

const ALL_EMPTY: Error = Error::EmptyInput("every bin is empty (input set was empty)");

/// Right-to-left pass: each empty bin takes the nearest non-empty bin to
/// its right. Bins right of the last non-empty bin wrap to the first one.
fn right_pass<T: Tally>(
    bins: &[Option<u32>],
    c: u32,
    fill: impl Fn(usize) -> bool,
    out: &mut [u32],
    tally: &mut T,
) -> Option<(usize, u32)> {
    let k = bins.len();
    tally.pass();
    let mut nearest: Option<(usize, u32)> = None;
    let mut tail = k;
    for j in (0..k).rev() {
        tally.visit();
        match bins[j] {
            Some(v) => {
                out[j] = v;
                nearest = Some((j, v));
            }
            None => match nearest {
                Some((idx, v)) => {
                    if fill(j) {
                        out[j] = v + (idx - j) as u32 * c;
                    }
                }
                None => tail = j,
            },
        }
    }
    let (first, v) = nearest?;
    for j in tail..k {
        if fill(j) {
            out[j] = v + (first + k - j) as u32 * c;
        }
    }
    Some((first, v))
}

/// Left-to-right pass: each empty bin takes the nearest non-empty bin to
/// its left. Bins left of the first non-empty bin wrap to the last one.
fn left_pass<T: Tally>(
    bins: &[Option<u32>],
    c: u32,
    fill: impl Fn(usize) -> bool,
    out: &mut [u32],
    tally: &mut T,
) -> Option<(usize, u32)> {
    let k = bins.len();
    tally.pass();
    let mut nearest: Option<(usize, u32)> = None;
    let mut head = 0;
    for j in 0..k {
        tally.visit();
        match bins[j] {
            Some(v) => {
                out[j] = v;
                nearest = Some((j, v));
            }
            None => match nearest {
                Some((idx, v)) => {
                    if fill(j) {
                        out[j] = v + (j - idx) as u32 * c;
                    }
                }
                None => head = j + 1,
            },
        }
    }
    let (last, v) = nearest?;
    for j in 0..head {
        if fill(j) {
            out[j] = v + (j + k - last) as u32 * c;
        }
    }
    Some((last, v))
}

pub(crate) fn rotation_with<T: Tally>(
    sk: &OphSketch,
    u: &UniverseParams,
    tally: &mut T,
) -> Result<DensifiedSketch> {
    check_len(sk, u)?;
    let mut out = vec![0u32; sk.len()];
    right_pass(sk.bins(), u.offset(), |_| true, &mut out, tally).ok_or(ALL_EMPTY)?;
    Ok(DensifiedSketch::new(out, Scheme::Rotation))
}

pub(crate) fn bidirectional_with<T: Tally>(
    sk: &OphSketch,
    q: &DirectionBits,
    u: &UniverseParams,
    tally: &mut T,
) -> Result<DensifiedSketch> {
    check_len(sk, u)?;
    if q.len() != sk.len() {
        return Err(config(format!(
            "{} direction bits for {} bins",
            q.len(),
            sk.len()
        )));
    }
    let bits = q.bits();
    let mut out = vec![0u32; sk.len()];
    left_pass(sk.bins(), u.offset(), |j| !bits[j], &mut out, tally).ok_or(ALL_EMPTY)?;
    right_pass(sk.bins(), u.offset(), |j| bits[j], &mut out, tally).ok_or(ALL_EMPTY)?;
    Ok(DensifiedSketch::new(out, Scheme::Bidirectional))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::permutation::SeededPermutation;
    use crate::sketch::{fixtures::worked_pair, oph_sketch};

    fn u(d: u32, k: u32) -> UniverseParams {
        UniverseParams::new(d, k).unwrap()
    }

    fn sk(bins: &[Option<u32>], width: u32) -> OphSketch {
        OphSketch::from_bins(bins.to_vec(), width).unwrap()
    }

    fn worked_sketches() -> (OphSketch, OphSketch, UniverseParams) {
        let (s1, s2) = worked_pair();
        let u = u(24, 6);
        let id = SeededPermutation::identity(24);
        (oph_sketch(&s1, &id, &u).unwrap(), oph_sketch(&s2, &id, &u).unwrap(), u)
    }

    /// Nearest non-empty bin by brute-force walking.
    fn naive(bins: &[Option<u32>], c: u32, right: &[bool]) -> Vec<u32> {
        let k = bins.len();
        (0..k)
            .map(|j| {
                if let Some(v) = bins[j] {
                    return v;
                }
                for t in 1..k {
                    let idx = if right[j] { (j + t) % k } else { (j + k - t) % k };
                    if let Some(v) = bins[idx] {
                        return v + t as u32 * c;
                    }
                }
                unreachable!()
            })
            .collect()
    }

    #[test]
    fn rotation_small() {
        // C = 5 for D = 12, k = 3.
        let d = densify_rotation(&sk(&[None, Some(1), None], 4), &u(12, 3)).unwrap();
        assert_eq!(d.values(), &[6, 1, 11]);
        assert_eq!(d.scheme(), Scheme::Rotation);
    }

    #[test]
    fn rotation_worked_pair() {
        let (a, b, u) = worked_sketches();
        let c = u.offset();
        let da = densify_rotation(&a, &u).unwrap();
        let db = densify_rotation(&b, &u).unwrap();
        // S1 bin 2 borrows 2 from bin 3.
        assert_eq!(da.values()[2], 2 + c);
        // S2 bin 0 borrows from bin 1, bin 5 borrows through bin 0.
        assert_eq!(db.values()[0], 1 + c);
        assert_eq!(db.values()[5], 1 + 2 * c);
        // Bin 5 is not simultaneously empty and must not collide.
        assert_ne!(da.values()[5], db.values()[5]);
    }

    #[test]
    fn rotation_dense_is_identity() {
        let d = densify_rotation(&sk(&[Some(3), Some(0), Some(2)], 4), &u(12, 3)).unwrap();
        assert_eq!(d.values(), &[3, 0, 2]);
    }

    #[test]
    fn bidirectional_small() {
        let q = DirectionBits::from_bits(vec![false, true, true]);
        let d = densify_bidirectional(&sk(&[None, Some(1), None], 4), &q, &u(12, 3)).unwrap();
        assert_eq!(d.values(), &[11, 1, 11]);
    }

    #[test]
    fn bidirectional_worked_pair() {
        let (a, b, u) = worked_sketches();
        let c = u.offset();
        // q0 = 0, q2 = 0, q5 = 1; other bits are irrelevant (non-empty bins).
        let q = DirectionBits::from_bits(vec![false, true, false, true, false, true]);
        let da = densify_bidirectional(&a, &q, &u).unwrap();
        let db = densify_bidirectional(&b, &q, &u).unwrap();
        assert_eq!(da.values()[0], 1 + c);
        assert_eq!(da.values()[2], a.bins()[1].unwrap() + c);
        assert_eq!(db.values()[0], 2 * c);
        assert_eq!(db.values()[2], 1 + c);
        assert_eq!(db.values()[5], 1 + 2 * c);
        for j in [1, 3, 4, 5] {
            assert_eq!(Some(da.values()[j]), a.bins()[j]);
        }
    }

    #[test]
    fn all_empty_is_an_error() {
        let e = sk(&[None, None], 4);
        assert_eq!(densify_rotation(&e, &u(8, 2)), Err(ALL_EMPTY));
        let q = DirectionBits::from_bits(vec![true, false]);
        assert_eq!(densify_bidirectional(&e, &q, &u(8, 2)), Err(ALL_EMPTY));
    }

    #[test]
    fn bit_length_mismatch() {
        let q = DirectionBits::from_bits(vec![true]);
        let r = densify_bidirectional(&sk(&[Some(1), None], 4), &q, &u(8, 2));
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn visit_counts() {
        let s = sk(&[None, Some(1), None, None, Some(0), None], 4);
        let u = u(24, 6);
        let mut c = CostCounters::default();
        densify_rotation_counted(&s, &u, &mut c).unwrap();
        assert_eq!((c.bin_visits, c.densify_passes), (6, 1));
        let mut c = CostCounters::default();
        densify_bidirectional_counted(&s, &DirectionBits::new(1, 6), &u, &mut c).unwrap();
        assert_eq!((c.bin_visits, c.densify_passes), (12, 2));
    }

    #[test]
    fn scheme_round_trips_through_str() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert!("left".parse::<Scheme>().is_err());
    }

    fn arb_bins() -> impl Strategy<Value = (Vec<Option<u32>>, Vec<bool>)> {
        (1usize..24).prop_flat_map(|k| {
            (
                prop::collection::vec(prop::option::weighted(0.3, 0u32..7), k)
                    .prop_filter("needs a non-empty bin", |b| b.iter().any(Option::is_some)),
                prop::collection::vec(any::<bool>(), k),
            )
        })
    }

    proptest! {
        #[test]
        fn matches_naive_search((bins, right) in arb_bins()) {
            let k = bins.len() as u32;
            let u = u(7 * k, k);
            let s = sk(&bins, 7);
            let rot = densify_rotation(&s, &u).unwrap();
            let want = naive(&bins, u.offset(), &vec![true; bins.len()]);
            prop_assert_eq!(rot.values(), want.as_slice());
            let bi = densify_bidirectional(&s, &DirectionBits::from_bits(right.clone()), &u).unwrap();
            let want = naive(&bins, u.offset(), &right);
            prop_assert_eq!(bi.values(), want.as_slice());
            for d in [&rot, &bi] {
                for (j, &v) in d.values().iter().enumerate() {
                    prop_assert!((v as u64) < u.value_bound());
                    if let Some(b) = bins[j] {
                        prop_assert_eq!(v, b);
                    }
                }
            }
        }
    }
}
