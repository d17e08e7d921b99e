//! Exhaustive checks of bucket collisions on tiny universes.

use itertools::Itertools;
use num_rational::Ratio;

use ophash::{
    meta_hash, resemblance_exact, DirectionBits, HashFamily, LshParams, Scheme, SeededPermutation,
    SparseBinarySet, UniverseParams,
};

fn set(d: u32, ix: &[u32]) -> SparseBinarySet {
    SparseBinarySet::new(d, ix.to_vec()).unwrap()
}

/// Every (permutation, direction bits) family on `[0, d)` with `k` bins.
fn families(d: u32, k: u32, scheme: Scheme) -> Vec<HashFamily> {
    let u = UniverseParams::new(d, k).unwrap();
    let masks = match scheme {
        Scheme::Rotation => 1,
        Scheme::Bidirectional => 1u64 << k,
    };
    (0..d)
        .permutations(d as usize)
        .flat_map(|p| {
            (0..masks).map(move |m| {
                let perm = SeededPermutation::from_mapping(p.clone()).unwrap();
                HashFamily::from_parts(u, perm, DirectionBits::from_mask(m, k), scheme).unwrap()
            })
        })
        .collect()
}

#[test]
fn independent_components_collide_with_probability_r_to_the_k() {
    // Each component is bin 0 of its own family; K components are drawn
    // independently, so the census is over the K-fold product.
    let d = 4;
    for (a, b) in [(vec![0, 1], vec![1, 2]), (vec![0], vec![0, 3]), (vec![2], vec![2])] {
        let (s1, s2) = (set(d, &a), set(d, &b));
        let r = resemblance_exact(&s1, &s2).unwrap();
        for scheme in Scheme::ALL {
            let fams = families(d, 2, scheme);
            let hits: Vec<bool> = fams
                .iter()
                .map(|f| f.sketch(&s1).unwrap().values()[0] == f.sketch(&s2).unwrap().values()[0])
                .collect();
            let n = hits.len() as u64;
            let single = hits.iter().filter(|&&h| h).count() as u64;
            assert_eq!(Ratio::new(single, n), r);
            for kk in 1..=3u32 {
                let both = (0..kk)
                    .map(|_| hits.iter())
                    .multi_cartesian_product()
                    .filter(|combo| combo.iter().all(|&&h| h))
                    .count() as u64;
                assert_eq!(Ratio::new(both, n.pow(kk)), r.pow(kk as i32), "{scheme} K={kk}");
            }
        }
    }
}

#[test]
fn disjoint_sets_never_share_a_bucket() {
    let params = LshParams::new(2, 1).unwrap();
    for (d, a, b) in [(4, vec![0], vec![3]), (6, vec![0, 1], vec![2, 5]), (6, vec![4], vec![0, 1, 2])] {
        for scheme in Scheme::ALL {
            for f in families(d, 2, scheme) {
                let k1 = meta_hash(&f.sketch(&set(d, &a)).unwrap(), 0, &params).unwrap();
                let k2 = meta_hash(&f.sketch(&set(d, &b)).unwrap(), 0, &params).unwrap();
                assert_ne!(k1, k2);
            }
        }
    }
}
