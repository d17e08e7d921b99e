use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{config, Error, Result};
use crate::lsh::{query_candidates, LshIndex};
use crate::set::SparseBinarySet;

/// Exact top-`n` neighbors of each query by resemblance.
///
/// Only items sharing at least one feature with the query are eligible.
/// Ties are broken by smaller id, so the lists are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldStandard {
    pub n: usize,
    pub neighbors: Vec<Vec<u32>>,
}

/// `(a, union)` with a larger `a / union` first, then the smaller id.
fn by_resemblance(x: &(u32, u64, u64), y: &(u32, u64, u64)) -> Ordering {
    let (ix, ax, ux) = *x;
    let (iy, ay, uy) = *y;
    (ay as u128 * ux as u128)
        .cmp(&(ax as u128 * uy as u128))
        .then(ix.cmp(&iy))
}

pub fn gold_standard(
    corpus: &[SparseBinarySet],
    queries: &[SparseBinarySet],
    n: usize,
) -> Result<GoldStandard> {
    if n == 0 {
        return Err(config("gold standard size must be positive"));
    }
    let dims = corpus.iter().map(|s| s.universe() as usize).max().unwrap_or(0);
    let mut postings: Vec<Vec<u32>> = vec![Vec::new(); dims];
    for (id, s) in corpus.iter().enumerate() {
        for &x in s.indices() {
            postings[x as usize].push(id as u32);
        }
    }
    let neighbors = queries
        .par_iter()
        .map_init(
            || vec![0u32; corpus.len()],
            |overlap, q| {
                let mut touched = Vec::new();
                for &x in q.indices() {
                    for &id in postings.get(x as usize).map_or(&[][..], Vec::as_slice) {
                        if overlap[id as usize] == 0 {
                            touched.push(id);
                        }
                        overlap[id as usize] += 1;
                    }
                }
                let mut scored: Vec<(u32, u64, u64)> = touched
                    .into_iter()
                    .map(|id| {
                        let a = std::mem::take(&mut overlap[id as usize]) as u64;
                        let u = (q.len() + corpus[id as usize].len()) as u64 - a;
                        (id, a, u)
                    })
                    .collect();
                if scored.len() > n {
                    scored.select_nth_unstable_by(n - 1, by_resemblance);
                    scored.truncate(n);
                }
                scored.sort_unstable_by(by_resemblance);
                scored.into_iter().map(|(id, _, _)| id).collect()
            },
        )
        .collect();
    Ok(GoldStandard { n, neighbors })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryOutcome {
    /// Fraction of the gold neighbors among the candidates; `None` when the
    /// query has no neighbor sharing a feature.
    pub recall: Option<f64>,
    pub candidates: u64,
    pub scanned: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecallReport {
    pub per_query: Vec<QueryOutcome>,
    /// Mean over queries with a defined recall.
    pub mean_recall: f64,
    /// Mean deduplicated candidates per query.
    pub mean_candidates: f64,
    /// Mean bucket entries touched per query, before deduplication.
    pub mean_scanned: f64,
    pub queries_without_neighbors: usize,
}

pub fn evaluate_recall(
    idx: &LshIndex,
    queries: &[SparseBinarySet],
    gold: &GoldStandard,
) -> Result<RecallReport> {
    if queries.is_empty() {
        return Err(Error::EmptyInput("no queries"));
    }
    if gold.neighbors.len() != queries.len() {
        return Err(config(format!(
            "gold standard has {} entries for {} queries",
            gold.neighbors.len(),
            queries.len()
        )));
    }
    let per_query = queries
        .par_iter()
        .zip(&gold.neighbors)
        .map(|(q, truth)| {
            let r = if q.is_empty() {
                Default::default()
            } else {
                query_candidates(q, idx)?
            };
            let recall = (!truth.is_empty()).then(|| {
                let hit = truth
                    .iter()
                    .filter(|id| r.candidates.binary_search(id).is_ok())
                    .count();
                hit as f64 / truth.len() as f64
            });
            Ok(QueryOutcome {
                recall,
                candidates: r.candidates.len() as u64,
                scanned: r.scanned,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let defined: Vec<f64> = per_query.iter().filter_map(|o| o.recall).collect();
    let nq = per_query.len() as f64;
    Ok(RecallReport {
        mean_recall: if defined.is_empty() {
            0.0
        } else {
            defined.iter().sum::<f64>() / defined.len() as f64
        },
        mean_candidates: per_query.iter().map(|o| o.candidates as f64).sum::<f64>() / nq,
        mean_scanned: per_query.iter().map(|o| o.scanned as f64).sum::<f64>() / nq,
        queries_without_neighbors: per_query.len() - defined.len(),
        per_query,
    })
}
