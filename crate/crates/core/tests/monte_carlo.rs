//! Sampled checks of the closed forms. Each run uses fixed seeds.

use ophash::oracle::{empirical_mse_paired, lemma_census};
use ophash::{PairStats, Scheme, UniverseParams, Variances};

#[test]
fn empirical_mse_matches_closed_form() {
    for ps in [
        PairStats::new(8, 6, 4, 1024, 64).unwrap(),
        PairStats::new(60, 50, 30, 1024, 32).unwrap(),
        PairStats::new(300, 280, 150, 4096, 32).unwrap(),
    ] {
        let v = Variances::compute(&ps).unwrap();
        let [rot, bi] = empirical_mse_paired(&ps, 200_000, 7).unwrap();
        for (est, want) in [(&rot, v.var_old), (&bi, v.var_new_exact())] {
            let z = (est.mse() - want) / est.std_error();
            assert!(z.abs() < 4.0, "{ps:?} {}: mse {} closed {} z {z}", est.scheme, est.mse(), want);
        }
    }
}

#[test]
fn conditional_pair_sums_match_closed_form() {
    for (ps, scheme) in [
        (PairStats::new(4, 3, 2, 24, 6).unwrap(), Scheme::Rotation),
        (PairStats::new(4, 3, 2, 24, 6).unwrap(), Scheme::Bidirectional),
    ] {
        let b = lemma_census(&ps, 200_000, scheme, 11).unwrap();
        for c in b.by_m.iter().filter(|c| c.trials() >= 1000) {
            let e = b.expected(c.m).unwrap();
            for (mom, want, what) in [(&c.nn, e.nn, "nn"), (&c.ne, e.ne, "ne"), (&c.ee, e.ee, "ee")] {
                assert!(mom.within(want, 4.0), "{scheme} m={} {what}: {} vs {want}", c.m, mom.mean());
            }
        }
    }
}

#[test]
fn sparse_pair_mse_within_two_percent() {
    let u = UniverseParams::new(10000, 256).unwrap();
    assert_eq!(u.universe(), 10240);
    let ps = PairStats::with_universe(200, 200, 100, &u).unwrap();
    let v = Variances::compute(&ps).unwrap();
    let [rot, bi] = empirical_mse_paired(&ps, 1_000_000, 3).unwrap();
    for (est, want) in [(&rot, v.var_old), (&bi, v.var_new)] {
        let rel = (est.mse() - want).abs() / want;
        assert!(rel < 0.02, "{}: mse {} closed {want} rel {rel}", est.scheme, est.mse());
    }
}
