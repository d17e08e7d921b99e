use num_rational::Ratio;

use crate::densify::{densify_bidirectional, densify_rotation, DirectionBits, Scheme};
use crate::error::{config, Result};
use crate::sketch::OphSketch;
use crate::universe::UniverseParams;

/// Exact probability that two given simultaneously-empty bins borrow from
/// the same non-empty bin, when `m` bins are non-empty.
///
/// Only the relative order of the `m` non-empty bins and the two empty bins
/// matters (other empty bins never change which non-empty bin is nearest),
/// and all `(m + 1)(m + 2)` orders are equally likely. Each order is laid
/// out on a ring of `m + 2` bins whose non-empty bins hold distinct values,
/// densified with the real densifier (under all four direction-bit choices
/// for the two empty bins in the bidirectional case), and the source bin is
/// read back from the densified value.
pub fn reuse_probability(m: u32, scheme: Scheme) -> Result<Ratio<u64>> {
    if m < 1 {
        return Err(config("reuse probability needs at least one non-empty bin"));
    }
    let k = m + 2;
    // Non-empty values are their rank among non-empty bins, below the width.
    let width = k;
    let u = UniverseParams::new(k * width, k)?;
    let source = |v: u32| v % u.offset();

    let (mut same, mut total) = (0u64, 0u64);
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            let mut rank = 0;
            let bins = (0..k)
                .map(|b| {
                    (b != i && b != j).then(|| {
                        rank += 1;
                        rank - 1
                    })
                })
                .collect();
            let sk = OphSketch::from_bins(bins, width)?;
            match scheme {
                Scheme::Rotation => {
                    let d = densify_rotation(&sk, &u)?;
                    total += 1;
                    same += (source(d.values()[i as usize]) == source(d.values()[j as usize])) as u64;
                }
                Scheme::Bidirectional => {
                    for (qi, qj) in [(false, false), (false, true), (true, false), (true, true)] {
                        let mut bits = vec![false; k as usize];
                        bits[i as usize] = qi;
                        bits[j as usize] = qj;
                        let d = densify_bidirectional(&sk, &DirectionBits::from_bits(bits), &u)?;
                        total += 1;
                        same += (source(d.values()[i as usize]) == source(d.values()[j as usize]))
                            as u64;
                    }
                }
            }
        }
    }
    debug_assert_eq!(
        total,
        (m as u64 + 1) * (m as u64 + 2) * if scheme == Scheme::Rotation { 1 } else { 4 }
    );
    Ok(Ratio::new(same, total))
}
