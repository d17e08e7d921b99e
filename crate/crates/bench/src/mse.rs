//! Empirical MSE of both estimators against the closed-form variances.

use ophash::oracle::{empirical_mse, empirical_mse_paired, stream_rng, MseEstimate};
use ophash::{PairStats, Scheme, UniverseParams, Variances};
use rand::RngCore;

use crate::data::WordPair;
use crate::error::{usage, Result};
use crate::report::Row;

/// A pair by its counts on a universe of `universe` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPair {
    pub name: String,
    pub f1: u64,
    pub f2: u64,
    pub a: u64,
    pub universe: u64,
}

impl NamedPair {
    pub fn from_word_pair(p: &WordPair, universe: u64) -> Self {
        Self {
            name: p.name.to_string(),
            f1: p.f1 as u64,
            f2: p.f2 as u64,
            a: p.intersection() as u64,
            universe,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseConfig {
    pub pairs: Vec<NamedPair>,
    pub ks: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseRow {
    pub pair_id: String,
    pub f1: u64,
    pub f2: u64,
    pub a: u64,
    /// Universe after padding to a multiple of `k`.
    pub universe: u64,
    pub k: u64,
    pub scheme: Scheme,
    pub empirical_mse: f64,
    pub std_error: f64,
    /// Closed form, with every `m` treated alike.
    pub theoretical_var: f64,
    /// Closed form including the single-occupied-bin term.
    pub theoretical_var_exact: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Row for MseRow {
    fn header() -> &'static [&'static str] {
        &[
            "pair_id",
            "f1",
            "f2",
            "a",
            "D",
            "k",
            "scheme",
            "empirical_mse",
            "std_error",
            "theoretical_var",
            "theoretical_var_exact",
            "trials",
            "seed",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.pair_id.clone(),
            self.f1.to_string(),
            self.f2.to_string(),
            self.a.to_string(),
            self.universe.to_string(),
            self.k.to_string(),
            self.scheme.to_string(),
            self.empirical_mse.to_string(),
            self.std_error.to_string(),
            self.theoretical_var.to_string(),
            self.theoretical_var_exact.to_string(),
            self.trials.to_string(),
            self.seed.to_string(),
        ]
    }
}

impl MseConfig {
    fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() || self.ks.is_empty() || self.schemes.is_empty() {
            return Err(usage("pairs, k grid and schemes must be nonempty"));
        }
        if self.trials == 0 {
            return Err(usage("trials must be positive"));
        }
        Ok(())
    }
}

/// Seed of one `(pair, k)` cell, derived from the master seed.
pub fn cell_seed(seed: u64, pair: usize, k: u64) -> u64 {
    stream_rng(seed, ((pair as u64) << 32) | k).next_u64()
}

/// Rows ordered by pair, then `k`, then scheme. Notes list every padded
/// universe.
pub fn run_mse_experiment(cfg: &MseConfig) -> Result<(Vec<MseRow>, Vec<String>)> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for (pi, p) in cfg.pairs.iter().enumerate() {
        for &k in &cfg.ks {
            let d = u32::try_from(p.universe).map_err(|_| usage("D too large"))?;
            let kk = u32::try_from(k).map_err(|_| usage("k too large"))?;
            let u = UniverseParams::new(d, kk)?;
            if u.padding() > 0 {
                notes.push(format!(
                    "{} k={k}: D padded from {} to {}",
                    p.name,
                    p.universe,
                    u.universe()
                ));
            }
            let ps = PairStats::new(p.f1, p.f2, p.a, u.universe() as u64, k)?;
            let v = Variances::compute(&ps)?;
            let seed = cell_seed(cfg.seed, pi, k);
            let estimates: Vec<MseEstimate> = if cfg.schemes.len() == 2 {
                empirical_mse_paired(&ps, cfg.trials, seed)?.to_vec()
            } else {
                vec![empirical_mse(&ps, cfg.trials, cfg.schemes[0], seed)?]
            };
            for est in estimates {
                let (theory, exact) = match est.scheme {
                    Scheme::Rotation => (v.var_old, v.var_old),
                    Scheme::Bidirectional => (v.var_new, v.var_new_exact()),
                };
                rows.push(MseRow {
                    pair_id: p.name.clone(),
                    f1: p.f1,
                    f2: p.f2,
                    a: p.a,
                    universe: ps.universe,
                    k,
                    scheme: est.scheme,
                    empirical_mse: est.mse(),
                    std_error: est.std_error(),
                    theoretical_var: theory,
                    theoretical_var_exact: exact,
                    trials: est.trials(),
                    seed: cfg.seed,
                });
            }
        }
    }
    Ok((rows, notes))
}
