use crate::cost::{CostCounters, Tally};
use crate::densify::{bidirectional_with, rotation_with, DensifiedSketch, DirectionBits, Scheme};
use crate::error::{config, Result};
use crate::permutation::{Permutation, SeededPermutation};
use crate::set::SparseBinarySet;
use crate::sketch::{oph_sketch_with, OphSketch};
use crate::universe::UniverseParams;

/// Everything that determines the `k` hash values of a set: the universe,
/// one permutation, the direction bits and the default scheme.
///
/// Direction bits belong to the family, not to the input: every set hashed
/// by the same family sees the same bits, which is what keeps bins aligned
/// across sets.
#[derive(Debug, Clone)]
pub struct HashFamily<P = SeededPermutation> {
    universe: UniverseParams,
    perm: P,
    bits: DirectionBits,
    scheme: Scheme,
}

impl HashFamily<SeededPermutation> {
    /// Materializes the permutation and draws direction bits from separate seeds.
    pub fn new(
        universe: UniverseParams,
        scheme: Scheme,
        perm_seed: u64,
        bits_seed: u64,
    ) -> Result<Self> {
        let perm = SeededPermutation::new(perm_seed, universe.universe())?;
        let bits = DirectionBits::new(bits_seed, universe.bins());
        Self::from_parts(universe, perm, bits, scheme)
    }
}

impl<P: Permutation> HashFamily<P> {
    pub fn from_parts(
        universe: UniverseParams,
        perm: P,
        bits: DirectionBits,
        scheme: Scheme,
    ) -> Result<Self> {
        if perm.universe() != universe.universe() {
            return Err(config(format!(
                "permutation over {} elements, universe has {}",
                perm.universe(),
                universe.universe()
            )));
        }
        if bits.len() != universe.bins() as usize {
            return Err(config(format!(
                "{} direction bits for {} bins",
                bits.len(),
                universe.bins()
            )));
        }
        Ok(Self {
            universe,
            perm,
            bits,
            scheme,
        })
    }

    pub fn universe(&self) -> &UniverseParams {
        &self.universe
    }

    pub fn permutation(&self) -> &P {
        &self.perm
    }

    pub fn bits(&self) -> &DirectionBits {
        &self.bits
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn k(&self) -> usize {
        self.universe.bins() as usize
    }

    pub fn oph(&self, s: &SparseBinarySet) -> Result<OphSketch> {
        oph_sketch_with(s, &self.perm, &self.universe, &mut ())
    }

    /// Densifies with an explicit scheme, sharing this family's permutation
    /// and bits. Used for paired comparisons of the two schemes.
    pub fn densify_as(&self, sk: &OphSketch, scheme: Scheme) -> Result<DensifiedSketch> {
        densify_with(sk, &self.bits, &self.universe, scheme, &mut ())
    }

    pub fn sketch(&self, s: &SparseBinarySet) -> Result<DensifiedSketch> {
        self.sketch_with(s, &mut ())
    }

    pub fn sketch_counted(
        &self,
        s: &SparseBinarySet,
        counters: &mut CostCounters,
    ) -> Result<DensifiedSketch> {
        self.sketch_with(s, counters)
    }

    fn sketch_with<T: Tally>(&self, s: &SparseBinarySet, tally: &mut T) -> Result<DensifiedSketch> {
        let oph = oph_sketch_with(s, &self.perm, &self.universe, tally)?;
        densify_with(&oph, &self.bits, &self.universe, self.scheme, tally)
    }
}

fn densify_with<T: Tally>(
    sk: &OphSketch,
    bits: &DirectionBits,
    u: &UniverseParams,
    scheme: Scheme,
    tally: &mut T,
) -> Result<DensifiedSketch> {
    match scheme {
        Scheme::Rotation => rotation_with(sk, u, tally),
        Scheme::Bidirectional => bidirectional_with(sk, bits, u, tally),
    }
}

/// `densify(oph_sketch(s))` under the family's scheme, in `O(d + k)`.
pub fn sketch_pipeline<P: Permutation>(
    s: &SparseBinarySet,
    family: &HashFamily<P>,
) -> Result<DensifiedSketch> {
    family.sketch(s)
}
