//! Paired `(K, L)` retrieval runs of both schemes.

use std::fs;
use std::path::{Path, PathBuf};

use ophash::lsh::{evaluate_recall, gold_standard, GoldStandard, Sourcing};
use ophash::oracle::stream_rng;
use ophash::{build_index, FamilyConfig, LshParams, Scheme, SparseBinarySet, UniverseParams};
use rand::RngCore;
use sha2::{Digest, Sha256};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::error::{usage, BenchError, Result};
use crate::report::Row;

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalConfig {
    pub dataset: String,
    /// Hashes per table.
    pub k: u32,
    /// Table counts to evaluate.
    pub ls: Vec<u32>,
    pub runs: u32,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
    pub gold_n: usize,
    pub sourcing: Sourcing,
    pub gold_cache: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalRow {
    pub dataset: String,
    pub scheme: Scheme,
    pub k: u32,
    pub l: u32,
    pub run: u32,
    pub mean_recall: f64,
    pub mean_candidates: f64,
    pub mean_scanned: f64,
    pub queries: usize,
    pub seed: u64,
}

impl Row for RetrievalRow {
    fn header() -> &'static [&'static str] {
        &[
            "dataset",
            "scheme",
            "K",
            "L",
            "run",
            "mean_recall_at_n",
            "mean_candidates",
            "mean_scanned",
            "queries",
            "seed",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.dataset.clone(),
            self.scheme.to_string(),
            self.k.to_string(),
            self.l.to_string(),
            self.run.to_string(),
            self.mean_recall.to_string(),
            self.mean_candidates.to_string(),
            self.mean_scanned.to_string(),
            self.queries.to_string(),
            self.seed.to_string(),
        ]
    }
}

/// Hash seed of run `run`, shared by both schemes.
pub fn run_seed(seed: u64, run: u32) -> u64 {
    stream_rng(seed, run as u64).next_u64()
}

fn corpus_digest(train: &[SparseBinarySet], queries: &[SparseBinarySet], n: usize) -> String {
    let mut h = Sha256::new();
    h.update((n as u64).to_le_bytes());
    for part in [train, queries] {
        h.update((part.len() as u64).to_le_bytes());
        for s in part {
            h.update((s.len() as u64).to_le_bytes());
            for x in s.indices() {
                h.update(x.to_le_bytes());
            }
        }
    }
    hex::encode(h.finalize())
}

fn read_gold(path: &Path, n: usize, queries: usize) -> Option<GoldStandard> {
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != format!("gold n={n} queries={queries}") {
        return None;
    }
    let neighbors = lines
        .map(|l| l.split_whitespace().map(|t| t.parse().ok()).collect::<Option<Vec<u32>>>())
        .collect::<Option<Vec<_>>>()?;
    (neighbors.len() == queries).then_some(GoldStandard { n, neighbors })
}

fn write_gold(path: &Path, gold: &GoldStandard) -> Result<()> {
    let mut text = format!("gold n={} queries={}\n", gold.n, gold.neighbors.len());
    for ids in &gold.neighbors {
        let line: Vec<String> = ids.iter().map(u32::to_string).collect();
        text.push_str(&line.join(" "));
        text.push('\n');
    }
    fs::write(path, text).map_err(BenchError::io(path))
}

/// Exact top-`n` lists, read from or stored in `cache` under a key derived
/// from the corpus contents.
pub fn cached_gold_standard(
    train: &[SparseBinarySet],
    queries: &[SparseBinarySet],
    n: usize,
    cache: Option<&Path>,
) -> Result<GoldStandard> {
    let Some(dir) = cache else {
        return Ok(gold_standard(train, queries, n)?);
    };
    let path = dir.join(format!("gold-{}.txt", &corpus_digest(train, queries, n)[..32]));
    if let Some(g) = read_gold(&path, n, queries.len()) {
        log::info!("gold standard loaded from {}", path.display());
        return Ok(g);
    }
    let g = gold_standard(train, queries, n)?;
    fs::create_dir_all(dir).map_err(BenchError::io(dir))?;
    write_gold(&path, &g)?;
    Ok(g)
}

impl RetrievalConfig {
    fn validate(&self) -> Result<()> {
        if self.ls.is_empty() || self.schemes.is_empty() {
            return Err(usage("L grid and schemes must be nonempty"));
        }
        if self.runs == 0 {
            return Err(usage("runs must be at least 1"));
        }
        if self.gold_n == 0 {
            return Err(usage("gold standard size must be positive"));
        }
        Ok(())
    }
}

/// One row per `(L, run, scheme)`, in that order. Every run uses the same
/// hash seed for both schemes.
pub fn run_retrieval_experiment(
    train: &[SparseBinarySet],
    queries: &[SparseBinarySet],
    universe: u32,
    cfg: &RetrievalConfig,
) -> Result<(Vec<RetrievalRow>, Vec<String>)> {
    cfg.validate()?;
    let gold = cached_gold_standard(train, queries, cfg.gold_n, cfg.gold_cache.as_deref())?;
    let mut notes = vec![format!(
        "{}: {} training items, {} queries, D = {universe}",
        cfg.dataset,
        train.len(),
        queries.len()
    )];
    let mut rows = Vec::new();
    for &l in &cfg.ls {
        let params = LshParams::new(cfg.k, l)?;
        let bins = match cfg.sourcing {
            Sourcing::Shared => params.total_hashes(),
            Sourcing::PerTable => params.hashes_per_table(),
        };
        let u = UniverseParams::new(universe, bins)?;
        if u.padding() > 0 {
            notes.push(format!(
                "K={} L={l}: D padded from {universe} to {} for k = {bins}",
                cfg.k,
                u.universe()
            ));
        }
        for run in 0..cfg.runs {
            for &scheme in &cfg.schemes {
                let family = FamilyConfig::new(universe, scheme, run_seed(cfg.seed, run))
                    .with_sourcing(cfg.sourcing);
                let idx = build_index(train, params, family)?;
                if !idx.skipped().is_empty() && run == 0 && scheme == cfg.schemes[0] {
                    log::warn!("{} empty training items skipped", idx.skipped().len());
                    notes.push(format!("L={l}: {} empty training items skipped", idx.skipped().len()));
                }
                let rep = evaluate_recall(&idx, queries, &gold)?;
                rows.push(RetrievalRow {
                    dataset: cfg.dataset.clone(),
                    scheme,
                    k: cfg.k,
                    l,
                    run,
                    mean_recall: rep.mean_recall,
                    mean_candidates: rep.mean_candidates,
                    mean_scanned: rep.mean_scanned,
                    queries: queries.len(),
                    seed: cfg.seed,
                });
            }
        }
    }
    Ok((rows, notes))
}

/// Both schemes at one `(K, L)`, over paired runs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSummary {
    pub k: u32,
    pub l: u32,
    pub runs: u32,
    pub recall_rotation: f64,
    pub recall_bidirectional: f64,
    pub candidates_rotation: f64,
    pub candidates_bidirectional: f64,
    /// Runs in which the bidirectional scheme returned fewer candidates.
    pub bidirectional_fewer: u32,
    pub ties: u32,
    /// One-sided sign test of "bidirectional returns fewer", ties dropped.
    pub sign_test_p: f64,
}

/// `P(X >= wins)` for `X ~ Binomial(n, 1/2)`.
pub fn sign_test_p(wins: u32, n: u32) -> f64 {
    if wins == 0 {
        return 1.0;
    }
    let b = Binomial::new(0.5, n as u64).expect("valid binomial");
    b.sf(wins as u64 - 1)
}

pub fn paired_summary(rows: &[RetrievalRow]) -> Vec<PairedSummary> {
    let mut keys: Vec<(u32, u32)> = rows.iter().map(|r| (r.k, r.l)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .filter_map(|(k, l)| {
            let of = |s| {
                let mut v: Vec<&RetrievalRow> = rows
                    .iter()
                    .filter(|r| r.k == k && r.l == l && r.scheme == s)
                    .collect();
                v.sort_by_key(|r| r.run);
                v
            };
            let (rot, bi) = (of(Scheme::Rotation), of(Scheme::Bidirectional));
            if rot.is_empty() || rot.len() != bi.len() {
                return None;
            }
            let n = rot.len() as f64;
            let mean = |v: &[&RetrievalRow], f: fn(&RetrievalRow) -> f64| v.iter().map(|r| f(r)).sum::<f64>() / n;
            let fewer = rot.iter().zip(&bi).filter(|(r, b)| b.mean_candidates < r.mean_candidates).count() as u32;
            let ties = rot.iter().zip(&bi).filter(|(r, b)| b.mean_candidates == r.mean_candidates).count() as u32;
            Some(PairedSummary {
                k,
                l,
                runs: rot.len() as u32,
                recall_rotation: mean(&rot, |r| r.mean_recall),
                recall_bidirectional: mean(&bi, |r| r.mean_recall),
                candidates_rotation: mean(&rot, |r| r.mean_candidates),
                candidates_bidirectional: mean(&bi, |r| r.mean_candidates),
                bidirectional_fewer: fewer,
                ties,
                sign_test_p: sign_test_p(fewer, rot.len() as u32 - ties),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_corpus, CorpusSpec};

    #[test]
    fn sign_test_values() {
        assert!((sign_test_p(10, 10) - 1.0 / 1024.0).abs() < 1e-12);
        assert!((sign_test_p(9, 10) - 11.0 / 1024.0).abs() < 1e-12);
        assert!((sign_test_p(8, 10) - 56.0 / 1024.0).abs() < 1e-12);
        assert_eq!(sign_test_p(0, 10), 1.0);
    }

    fn small() -> (Vec<SparseBinarySet>, Vec<SparseBinarySet>, u32) {
        let c = generate_corpus(&CorpusSpec {
            n_train: 400,
            n_query: 30,
            universe: 6000,
            mean_nnz: 30,
            seed: 2,
            ..Default::default()
        })
        .unwrap();
        (c.train, c.queries, c.universe)
    }

    fn cfg(k: u32, ls: Vec<u32>) -> RetrievalConfig {
        RetrievalConfig {
            dataset: "small".into(),
            k,
            ls,
            runs: 2,
            seed: 1,
            schemes: Scheme::ALL.to_vec(),
            gold_n: 10,
            sourcing: Sourcing::Shared,
            gold_cache: None,
        }
    }

    #[test]
    fn recall_grows_with_tables() {
        let (train, queries, d) = small();
        let (rows, _) = run_retrieval_experiment(&train, &queries, d, &cfg(3, vec![1, 4, 16, 64])).unwrap();
        assert_eq!(rows.len(), 4 * 2 * 2);
        for s in Scheme::ALL {
            for run in 0..2 {
                let r: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.scheme == s && r.run == run)
                    .map(|r| r.mean_recall)
                    .collect();
                assert!(r.windows(2).all(|w| w[0] <= w[1] + 0.02), "{s} {r:?}");
            }
        }
        let s = paired_summary(&rows);
        assert_eq!(s.len(), 4);
        assert!(s[3].recall_rotation > 0.9);
    }

    #[test]
    fn huge_k_retrieves_nothing() {
        let (train, queries, d) = small();
        let (rows, _) = run_retrieval_experiment(&train, &queries, d, &cfg(60, vec![1])).unwrap();
        for r in rows {
            assert!(r.mean_candidates < 0.1);
            assert!(r.mean_recall < 0.02);
        }
    }

    #[test]
    fn gold_cache_round_trip() {
        let (train, queries, _) = small();
        let dir = tempfile::tempdir().unwrap();
        let a = cached_gold_standard(&train, &queries, 10, Some(dir.path())).unwrap();
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let b = cached_gold_standard(&train, &queries, 10, Some(dir.path())).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, gold_standard(&train, &queries, 10).unwrap());
        let c = cached_gold_standard(&train, &queries, 5, Some(dir.path())).unwrap();
        assert_eq!(c.n, 5);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    }
}
