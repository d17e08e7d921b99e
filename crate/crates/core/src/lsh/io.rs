//! Binary index format, version 1, all integers big-endian:
//!
//! ```text
//! magic "OPHLSH" | version u16
//! K u32 | L u32 | D u32 | scheme u8 | sourcing u8 | perm_seed u64 | bits_seed u64
//! items u32 | skipped u32 | skipped ids u32 * skipped
//! per table: buckets u32, then per bucket: K values u32 * K | ids u32 | id u32 * ids
//! ```
//!
//! Hash functions are not stored; they are rebuilt from the seeds. Buckets
//! are written in key order so equal indexes serialize to equal bytes.

use std::io::{Read, Write};

use byteorder::{BigEndian, ReadBytesExt, WriteBytesExt};

use crate::densify::Scheme;
use crate::error::{Error, Result};
use crate::lsh::index::Table;
use crate::lsh::{FamilyConfig, LshIndex, LshParams, Sourcing};

const MAGIC: &[u8; 6] = b"OPHLSH";
const VERSION: u16 = 1;

fn format(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

impl LshIndex {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_u16::<BigEndian>(VERSION)?;
        w.write_u32::<BigEndian>(self.params.hashes_per_table())?;
        w.write_u32::<BigEndian>(self.params.tables())?;
        w.write_u32::<BigEndian>(self.config.universe)?;
        w.write_u8(match self.config.scheme {
            Scheme::Rotation => 0,
            Scheme::Bidirectional => 1,
        })?;
        w.write_u8(match self.config.sourcing {
            Sourcing::Shared => 0,
            Sourcing::PerTable => 1,
        })?;
        w.write_u64::<BigEndian>(self.config.perm_seed)?;
        w.write_u64::<BigEndian>(self.config.bits_seed)?;
        w.write_u32::<BigEndian>(self.items)?;
        w.write_u32::<BigEndian>(self.skipped.len() as u32)?;
        for &id in &self.skipped {
            w.write_u32::<BigEndian>(id)?;
        }
        for table in &self.tables {
            let mut buckets: Vec<_> = table.iter().collect();
            buckets.sort_unstable_by(|a, b| a.0.cmp(b.0));
            w.write_u32::<BigEndian>(buckets.len() as u32)?;
            for (key, ids) in buckets {
                w.write_all(key)?;
                w.write_u32::<BigEndian>(ids.len() as u32)?;
                for &id in ids {
                    w.write_u32::<BigEndian>(id)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 6];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(format("not an index file"));
        }
        let version = r.read_u16::<BigEndian>()?;
        if version != VERSION {
            return Err(format(format!("unsupported version {version}")));
        }
        let params = LshParams::new(r.read_u32::<BigEndian>()?, r.read_u32::<BigEndian>()?)
            .map_err(|e| format(e.to_string()))?;
        let universe = r.read_u32::<BigEndian>()?;
        let scheme = match r.read_u8()? {
            0 => Scheme::Rotation,
            1 => Scheme::Bidirectional,
            b => return Err(format(format!("unknown scheme tag {b}"))),
        };
        let sourcing = match r.read_u8()? {
            0 => Sourcing::Shared,
            1 => Sourcing::PerTable,
            b => return Err(format(format!("unknown sourcing tag {b}"))),
        };
        let config = FamilyConfig {
            universe,
            scheme,
            perm_seed: r.read_u64::<BigEndian>()?,
            bits_seed: r.read_u64::<BigEndian>()?,
            sourcing,
        };
        let items = r.read_u32::<BigEndian>()?;
        let n_skipped = r.read_u32::<BigEndian>()?;
        if n_skipped > items {
            return Err(format("more skipped items than items"));
        }
        let skipped = (0..n_skipped)
            .map(|_| r.read_u32::<BigEndian>())
            .collect::<std::io::Result<Vec<_>>>()?;
        let key_len = 4 * params.hashes_per_table() as usize;
        let mut tables = Vec::with_capacity(params.tables() as usize);
        for _ in 0..params.tables() {
            let buckets = r.read_u32::<BigEndian>()?;
            let mut table = Table::new();
            for _ in 0..buckets {
                let mut key = vec![0u8; key_len];
                r.read_exact(&mut key)?;
                let n = r.read_u32::<BigEndian>()?;
                if n > items {
                    return Err(format("bucket larger than the corpus"));
                }
                let ids = (0..n)
                    .map(|_| r.read_u32::<BigEndian>())
                    .collect::<std::io::Result<Vec<_>>>()?;
                if ids.iter().any(|&id| id >= items) {
                    return Err(format("item id out of range"));
                }
                if table.insert(key, ids).is_some() {
                    return Err(format("duplicate bucket key"));
                }
            }
            tables.push(table);
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(format("trailing bytes"));
        }
        Ok(LshIndex {
            params,
            config,
            families: config.families(&params)?,
            tables,
            items,
            skipped,
        })
    }
}
