use std::collections::HashMap;

use rand::RngCore;
use rayon::prelude::*;

use crate::densify::Scheme;
use crate::error::{config, Error, Result};
use crate::family::HashFamily;
use crate::lsh::{meta_hash, LshParams, MetaHashKey};
use crate::oracle::stream_rng;
use crate::set::SparseBinarySet;
use crate::universe::UniverseParams;

/// Where the `K * L` hash values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sourcing {
    /// One family with `k = K * L` bins; table `j` takes values `K*j .. K*j + K`.
    #[default]
    Shared,
    /// An independent family with `k = K` bins per table, seeded from the
    /// master seeds and the table number.
    PerTable,
}

/// Seeds and sizes that fully determine an index's hash functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyConfig {
    /// Requested universe size `D`, before padding.
    pub universe: u32,
    pub scheme: Scheme,
    pub perm_seed: u64,
    pub bits_seed: u64,
    pub sourcing: Sourcing,
}

impl FamilyConfig {
    pub fn new(universe: u32, scheme: Scheme, seed: u64) -> Self {
        Self {
            universe,
            scheme,
            perm_seed: seed,
            bits_seed: seed ^ 0x9e37_79b9_7f4a_7c15,
            sourcing: Sourcing::Shared,
        }
    }

    pub fn with_sourcing(mut self, sourcing: Sourcing) -> Self {
        self.sourcing = sourcing;
        self
    }

    pub(crate) fn families(&self, params: &LshParams) -> Result<Vec<HashFamily>> {
        match self.sourcing {
            Sourcing::Shared => {
                let u = UniverseParams::new(self.universe, params.total_hashes())?;
                Ok(vec![HashFamily::new(
                    u,
                    self.scheme,
                    self.perm_seed,
                    self.bits_seed,
                )?])
            }
            Sourcing::PerTable => {
                let u = UniverseParams::new(self.universe, params.hashes_per_table())?;
                (0..params.tables() as u64)
                    .into_par_iter()
                    .map(|j| {
                        let perm = stream_rng(self.perm_seed, j + 1).next_u64();
                        let bits = stream_rng(self.bits_seed, j + 1).next_u64();
                        HashFamily::new(u, self.scheme, perm, bits)
                    })
                    .collect()
            }
        }
    }
}

pub(crate) type Table = HashMap<Vec<u8>, Vec<u32>>;

/// `L` hash tables mapping bucket keys to corpus item ids.
///
/// Item ids are positions in the corpus passed to [`build_index`]; every
/// indexed item appears exactly once per table, and bucket lists are in
/// increasing id order.
#[derive(Debug, Clone)]
pub struct LshIndex {
    pub(crate) params: LshParams,
    pub(crate) config: FamilyConfig,
    pub(crate) families: Vec<HashFamily>,
    pub(crate) tables: Vec<Table>,
    pub(crate) items: u32,
    pub(crate) skipped: Vec<u32>,
}

/// Candidates of one query.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Retrieval {
    /// Union of the query's buckets, sorted and deduplicated.
    pub candidates: Vec<u32>,
    /// Sum of the bucket sizes, before deduplication.
    pub scanned: u64,
}

impl LshIndex {
    pub fn params(&self) -> &LshParams {
        &self.params
    }

    pub fn config(&self) -> &FamilyConfig {
        &self.config
    }

    /// Number of corpus positions, including skipped ones.
    pub fn items(&self) -> u32 {
        self.items
    }

    /// Ids of empty corpus items that were not indexed.
    pub fn skipped(&self) -> &[u32] {
        &self.skipped
    }

    pub fn table(&self, table_id: u32) -> Option<&HashMap<Vec<u8>, Vec<u32>>> {
        self.tables.get(table_id as usize)
    }

    pub fn bucket(&self, key: &MetaHashKey) -> &[u32] {
        self.tables
            .get(key.table_id as usize)
            .and_then(|t| t.get(&key.key))
            .map_or(&[], Vec::as_slice)
    }

    /// The `L` bucket keys of `s`.
    pub fn keys(&self, s: &SparseBinarySet) -> Result<Vec<MetaHashKey>> {
        if s.is_empty() {
            return Err(Error::EmptyInput("cannot hash an empty set"));
        }
        match self.config.sourcing {
            Sourcing::Shared => {
                let d = self.families[0].sketch(s)?;
                (0..self.params.tables())
                    .map(|j| meta_hash(&d, j, &self.params))
                    .collect()
            }
            Sourcing::PerTable => self
                .families
                .iter()
                .zip(0..)
                .map(|(f, j)| Ok(MetaHashKey::from_values(j, f.sketch(s)?.values())))
                .collect(),
        }
    }

    fn fill(&mut self, keys: Vec<Option<Vec<MetaHashKey>>>) {
        self.tables = (0..self.params.tables() as usize)
            .into_par_iter()
            .map(|j| {
                let mut table = Table::new();
                for (id, ks) in keys.iter().enumerate() {
                    if let Some(ks) = ks {
                        table.entry(ks[j].key.clone()).or_default().push(id as u32);
                    }
                }
                table
            })
            .collect();
    }
}

/// Sketches every corpus item and places it in its bucket of each table.
///
/// Empty items cannot be hashed; they are skipped and listed in
/// [`LshIndex::skipped`].
pub fn build_index(
    corpus: &[SparseBinarySet],
    params: LshParams,
    cfg: FamilyConfig,
) -> Result<LshIndex> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("empty corpus"));
    }
    let items = u32::try_from(corpus.len()).map_err(|_| config("corpus too large"))?;
    let mut idx = LshIndex {
        params,
        config: cfg,
        families: cfg.families(&params)?,
        tables: Vec::new(),
        items,
        skipped: Vec::new(),
    };
    let keys: Vec<Option<Vec<MetaHashKey>>> = corpus
        .par_iter()
        .map(|s| (!s.is_empty()).then(|| idx.keys(s)).transpose())
        .collect::<Result<_>>()?;
    idx.skipped = keys
        .iter()
        .zip(0..)
        .filter_map(|(k, id)| k.is_none().then_some(id))
        .collect();
    idx.fill(keys);
    Ok(idx)
}

/// Union of the `L` buckets the query falls into.
pub fn query_candidates(q: &SparseBinarySet, idx: &LshIndex) -> Result<Retrieval> {
    if q.is_empty() {
        return Err(Error::EmptyInput("empty query"));
    }
    let mut candidates = Vec::new();
    for key in idx.keys(q)? {
        candidates.extend_from_slice(idx.bucket(&key));
    }
    let scanned = candidates.len() as u64;
    candidates.sort_unstable();
    candidates.dedup();
    Ok(Retrieval {
        candidates,
        scanned,
    })
}
