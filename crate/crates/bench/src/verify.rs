//! Exhaustive and sampled checks of the hashing schemes, as a report.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use ophash::oracle::{
    exact_collision_probability, exact_estimator_moments, lemma_census, reuse_probability,
};
use ophash::{
    resemblance_exact, ExactVariances, PairStats, Scheme, SparseBinarySet, UniverseParams,
};

use crate::error::Result;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Sampled hash families per census configuration.
    pub census_trials: u64,
    /// Replaces the densification offset `C` in the enumerated checks.
    pub forced_offset: Option<u32>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            census_trials: 100_000,
            forced_offset: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn render(&self, cfg: &VerifyConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed {}", cfg.seed);
        let _ = writeln!(out, "# census trials {}", cfg.census_trials);
        if let Some(c) = cfg.forced_offset {
            let _ = writeln!(out, "# densification offset forced to {c}");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {}: observed {} expected {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.observed,
                c.expected
            );
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed",
            self.checks.len() - self.failures(),
            self.checks.len()
        );
        out
    }
}

/// Pairs on universes of 4, 6 and 8 elements used by the enumerated checks.
pub fn enumeration_pairs() -> Vec<(u32, u32, Vec<u32>, Vec<u32>)> {
    vec![
        (4, 2, vec![0], vec![0, 1]),
        (4, 2, vec![0, 2], vec![1, 2]),
        (4, 4, vec![1, 3], vec![3]),
        (6, 3, vec![0, 1, 2], vec![2, 3]),
        (6, 2, vec![4], vec![5]),
        (6, 3, vec![1, 5], vec![1, 5]),
        (8, 4, vec![0, 3, 5], vec![3, 5, 6, 7]),
        (8, 4, vec![6], vec![1, 6]),
        (8, 2, vec![2], vec![2, 7]),
    ]
}

fn show_ratio(r: &BigRational) -> String {
    format!("{r} ({:.6})", r.to_f64().unwrap_or(f64::NAN))
}

/// Census configurations on `D = 24`, `k = 6`: `(f1, f2, a)`.
pub const CENSUS_PAIRS: [(u64, u64, u64); 3] = [(4, 3, 2), (6, 6, 3), (10, 8, 5)];

/// Conditional classes need this many samples before they are checked.
pub const CENSUS_MIN_SAMPLES: u64 = 1000;

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();

    for (d, k, a, b) in enumeration_pairs() {
        let mut u = UniverseParams::new(d, k)?;
        if let Some(c) = cfg.forced_offset {
            u = u.with_offset_override(c);
        }
        let s1 = SparseBinarySet::new(d, a.clone())?;
        let s2 = SparseBinarySet::new(d, b.clone())?;
        let r = resemblance_exact(&s1, &s2)?;
        let ps = PairStats::from_sets(&s1, &s2, &u)?;
        let v = ExactVariances::compute(&ps)?;
        for scheme in Scheme::ALL {
            let tag = format!("D={d} k={k} S1={a:?} S2={b:?} {scheme}");
            let c = exact_collision_probability(&s1, &s2, &u, scheme)?;
            let probs = c.probabilities();
            let mut distinct: Vec<String> = probs.iter().map(|p| p.to_string()).collect();
            distinct.dedup();
            checks.push(Check {
                name: format!("collision {tag}"),
                observed: format!("[{}] spurious={}", distinct.join(","), c.spurious),
                expected: r.to_string(),
                pass: probs.iter().all(|&p| p == r) && c.spurious == 0,
            });
            let m = exact_estimator_moments(&s1, &s2, &u, scheme)?;
            let want = match scheme {
                Scheme::Rotation => v.var_old.clone(),
                Scheme::Bidirectional => v.var_new_exact(),
            };
            let got = m.variance();
            checks.push(Check {
                name: format!("variance {tag}"),
                observed: show_ratio(&got),
                expected: show_ratio(&want),
                pass: got == want,
            });
        }
    }

    for m in 1..=8u32 {
        for scheme in Scheme::ALL {
            let got = reuse_probability(m, scheme)?;
            let want = match (m, scheme) {
                (1, _) => num_rational::Ratio::from_integer(1),
                (_, Scheme::Rotation) => num_rational::Ratio::new(2, m as u64 + 1),
                (_, Scheme::Bidirectional) => num_rational::Ratio::new(3, 2 * (m as u64 + 1)),
            };
            checks.push(Check {
                name: format!("reuse m={m} {scheme}"),
                observed: got.to_string(),
                expected: want.to_string(),
                pass: got == want,
            });
        }
    }

    for (f1, f2, a, d, k) in [(5, 4, 2, 64, 8), (30, 20, 10, 1024, 64), (200, 150, 120, 4096, 32)] {
        let ps = PairStats::new(f1, f2, a, d, k)?;
        let v = ExactVariances::compute(&ps)?;
        let diff = &v.var_old - &v.var_new;
        checks.push(Check {
            name: format!("gap identity f1={f1} f2={f2} a={a} D={d} k={k}"),
            observed: show_ratio(&diff),
            expected: show_ratio(&v.gap),
            pass: diff == v.gap && v.gap >= BigRational::from_integer(0.into()),
        });
    }

    for (i, &(f1, f2, a)) in CENSUS_PAIRS.iter().enumerate() {
        let ps = PairStats::new(f1, f2, a, 24, 6)?;
        for (j, scheme) in Scheme::ALL.into_iter().enumerate() {
            let seed = cfg.seed.wrapping_add((2 * i + j) as u64);
            let census = lemma_census(&ps, cfg.census_trials, scheme, seed)?;
            for c in census.by_m.iter().filter(|c| c.trials() >= CENSUS_MIN_SAMPLES) {
                let e = census.expected(c.m)?;
                for (name, mom, want) in [("nn", c.nn, e.nn), ("ne", c.ne, e.ne), ("ee", c.ee, e.ee)] {
                    checks.push(Check {
                        name: format!("census f1={f1} f2={f2} a={a} {scheme} m={} {name}", c.m),
                        observed: format!("{:.6} +- {:.6} (n={})", mom.mean(), mom.std_error(), mom.n),
                        expected: format!("{want:.6}"),
                        pass: mom.within(want, 3.0),
                    });
                }
            }
        }
    }

    Ok(VerifyReport { checks })
}
