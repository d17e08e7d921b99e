//! `(K, L)` LSH over densified sketches.
//!
//! Table `j` buckets a set by the concatenation of `K` hash values. With the
//! default [`Sourcing::Shared`] all `K * L` values come from one family with
//! `k = K * L` bins, so sketching costs `O(d + KL)` per set.

mod index;
mod io;
mod recall;

pub use index::{build_index, query_candidates, FamilyConfig, LshIndex, Retrieval, Sourcing};
pub use recall::{evaluate_recall, gold_standard, GoldStandard, QueryOutcome, RecallReport};

use crate::densify::DensifiedSketch;
use crate::error::{config, Result};

/// `K` hashes per table, `L` tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LshParams {
    k: u32,
    l: u32,
}

impl LshParams {
    #[allow(non_snake_case)]
    pub fn new(K: u32, L: u32) -> Result<Self> {
        if K == 0 || L == 0 {
            return Err(config(format!("K and L must be positive, got K = {K}, L = {L}")));
        }
        if K.checked_mul(L).is_none() {
            return Err(config("K * L overflows"));
        }
        Ok(Self { k: K, l: L })
    }

    /// Hashes per table.
    pub fn hashes_per_table(&self) -> u32 {
        self.k
    }

    pub fn tables(&self) -> u32 {
        self.l
    }

    pub fn total_hashes(&self) -> u32 {
        self.k * self.l
    }
}

/// Bucket key of one table: `K` values as fixed-width big-endian `u32`s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaHashKey {
    pub table_id: u32,
    pub key: Vec<u8>,
}

impl MetaHashKey {
    pub fn from_values(table_id: u32, values: &[u32]) -> Self {
        let mut key = Vec::with_capacity(4 * values.len());
        for v in values {
            key.extend_from_slice(&v.to_be_bytes());
        }
        Self { table_id, key }
    }

    /// Decodes the component values.
    pub fn values(&self) -> Vec<u32> {
        self.key
            .chunks_exact(4)
            .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
            .collect()
    }
}

/// Key of table `table_id`: values `K*j .. K*j + K` of the sketch.
pub fn meta_hash(d: &DensifiedSketch, table_id: u32, params: &LshParams) -> Result<MetaHashKey> {
    if table_id >= params.tables() {
        return Err(config(format!(
            "table {table_id} out of range for L = {}",
            params.tables()
        )));
    }
    let k = params.hashes_per_table() as usize;
    let start = k * table_id as usize;
    let Some(slice) = d.values().get(start..start + k) else {
        return Err(config(format!(
            "table {table_id} needs values {start}..{}, sketch has {}",
            start + k,
            d.len()
        )));
    };
    Ok(MetaHashKey::from_values(table_id, slice))
}
