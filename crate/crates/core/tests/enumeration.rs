use num_rational::BigRational;

use ophash::oracle::{exact_collision_probability, exact_estimator_moments};
use ophash::{
    densify_bidirectional, densify_rotation, resemblance_exact, DirectionBits, ExactVariances,
    OphSketch, PairStats, Scheme, SparseBinarySet, UniverseParams,
};

fn set(d: u32, ix: &[u32]) -> SparseBinarySet {
    SparseBinarySet::new(d, ix.to_vec()).unwrap()
}

fn pairs() -> Vec<(u32, u32, Vec<u32>, Vec<u32>)> {
    vec![
        (4, 2, vec![0], vec![0, 1]),
        (4, 2, vec![0, 2], vec![1, 2]),
        (6, 3, vec![0, 1, 2], vec![2, 3]),
        (6, 2, vec![4], vec![5]),
        (6, 3, vec![1, 5], vec![1, 5]),
        (8, 4, vec![0, 3, 5], vec![3, 5, 6, 7]),
        (8, 2, vec![2], vec![2, 7]),
    ]
}

#[test]
fn per_bin_collision_probability_is_resemblance() {
    for (d, k, a, b) in pairs() {
        let u = UniverseParams::new(d, k).unwrap();
        let (s1, s2) = (set(d, &a), set(d, &b));
        let r = resemblance_exact(&s1, &s2).unwrap();
        for scheme in Scheme::ALL {
            let c = exact_collision_probability(&s1, &s2, &u, scheme).unwrap();
            assert_eq!(c.spurious, 0);
            for p in c.probabilities() {
                assert_eq!(p, r, "D={d} k={k} {a:?} {b:?} {scheme}");
            }
        }
    }
}

#[test]
fn closed_form_variances_match_enumeration() {
    for (d, k, a, b) in pairs() {
        let u = UniverseParams::new(d, k).unwrap();
        let (s1, s2) = (set(d, &a), set(d, &b));
        let ps = PairStats::from_sets(&s1, &s2, &u).unwrap();
        let v = ExactVariances::compute(&ps).unwrap();
        let rot = exact_estimator_moments(&s1, &s2, &u, Scheme::Rotation).unwrap();
        let bi = exact_estimator_moments(&s1, &s2, &u, Scheme::Bidirectional).unwrap();
        let r: BigRational = ps.resemblance();
        assert_eq!(rot.mean(), r);
        assert_eq!(bi.mean(), r);
        assert_eq!(rot.variance(), v.var_old, "rotation D={d} k={k} {a:?} {b:?}");
        assert_eq!(bi.variance(), v.var_new_exact(), "bidirectional D={d} k={k} {a:?} {b:?}");
        assert_eq!(&v.var_old - &v.var_new, v.gap);
    }
}

#[test]
fn single_bin_term_visible_on_tiny_universe() {
    // Union of 2 in 8 slots with k = 4 puts both elements in one bin with
    // probability 1/7, so the printed formula alone is off.
    let u = UniverseParams::new(8, 4).unwrap();
    let (s1, s2) = (set(8, &[0]), set(8, &[0, 1]));
    let ps = PairStats::from_sets(&s1, &s2, &u).unwrap();
    let v = ExactVariances::compute(&ps).unwrap();
    let bi = exact_estimator_moments(&s1, &s2, &u, Scheme::Bidirectional).unwrap();
    assert_ne!(bi.variance(), v.var_new);
    assert!(v.single_bin_correction > BigRational::from_integer(0.into()));
    assert_eq!(bi.variance(), v.var_new_exact());
}

#[test]
fn one_occupied_bin_gives_same_matches_under_both_schemes() {
    let k = 5u32;
    let u = UniverseParams::new(20, k).unwrap();
    for bin in 0..k as usize {
        for (v1, v2) in [(0, 0), (1, 3), (2, 2)] {
            let mk = |v: u32| {
                let mut bins = vec![None; k as usize];
                bins[bin] = Some(v);
                OphSketch::from_bins(bins, u.bin_width()).unwrap()
            };
            let (o1, o2) = (mk(v1), mk(v2));
            let matches = |x: &[u32], y: &[u32]| x.iter().zip(y).filter(|(a, b)| a == b).count();
            let rot = matches(
                densify_rotation(&o1, &u).unwrap().values(),
                densify_rotation(&o2, &u).unwrap().values(),
            );
            assert_eq!(rot, if v1 == v2 { k as usize } else { 0 });
            for mask in 0..1u64 << k {
                let q = DirectionBits::from_mask(mask, k);
                let bi = matches(
                    densify_bidirectional(&o1, &q, &u).unwrap().values(),
                    densify_bidirectional(&o2, &q, &u).unwrap().values(),
                );
                assert_eq!(bi, rot);
            }
        }
    }
}

#[test]
fn enumeration_beyond_bound_is_refused() {
    let u = UniverseParams::new(12, 3).unwrap();
    let r = exact_collision_probability(&set(12, &[0]), &set(12, &[1]), &u, Scheme::Rotation);
    assert!(r.is_err());
}
