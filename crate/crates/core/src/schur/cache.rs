//! Structure-constant tables for `S(n, d)`, stored as little-endian binary or
//! JSON lines. Both encodings carry the same records and convert losslessly.

use std::fs;
use std::io::{BufRead, BufReader, Cursor, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use super::algebra::{SchurAlgebra, SparseElem};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"SPFSCHUR";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format_version: u32,
    pub p: u32,
    pub n: u32,
    pub d: u32,
    pub basis_count: u32,
}

/// One record per left basis element: every compatible right factor with
/// the coordinates of the product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftRecord {
    pub left: u32,
    pub products: Vec<(u32, SparseElem)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    pub header: CacheHeader,
    pub records: Vec<LeftRecord>,
}

impl StructureTable {
    /// Computes every product `xi_a xi_b` with `colsum(a) = rowsum(b)`.
    pub fn compute(alg: &SchurAlgebra) -> Self {
        let header = CacheHeader {
            format_version: FORMAT_VERSION,
            p: alg.field().p(),
            n: alg.n() as u32,
            d: alg.d() as u32,
            basis_count: alg.dim() as u32,
        };
        let records = (0..alg.dim() as u32)
            .map(|a| LeftRecord {
                left: a,
                products: alg
                    .with_rowsum(alg.colsum(a))
                    .iter()
                    .map(|&b| (b, (*alg.basis_product(a, b)).clone()))
                    .collect(),
            })
            .collect();
        StructureTable { header, records }
    }

    /// Seeds the algebra's product memo from this table.
    pub fn load_into(&self, alg: &SchurAlgebra) -> Result<()> {
        self.check_matches(alg)?;
        for rec in &self.records {
            for (b, prod) in &rec.products {
                alg.insert_product(rec.left, *b, prod.clone());
            }
        }
        Ok(())
    }

    pub fn check_matches(&self, alg: &SchurAlgebra) -> Result<()> {
        let h = &self.header;
        if h.p != alg.field().p()
            || h.n as usize != alg.n()
            || h.d as usize != alg.d()
            || h.basis_count as usize != alg.dim()
        {
            return Err(Error::CacheFormat(format!(
                "table is for p={} n={} d={} ({} basis elements), algebra is {:?}",
                h.p, h.n, h.d, h.basis_count, alg
            )));
        }
        Ok(())
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        let h = &self.header;
        for v in [h.format_version, h.p, h.n, h.d, h.basis_count] {
            out.write_u32::<LittleEndian>(v).unwrap();
        }
        for rec in &self.records {
            out.write_u32::<LittleEndian>(rec.left).unwrap();
            out.write_u32::<LittleEndian>(rec.products.len() as u32).unwrap();
            for (b, prod) in &rec.products {
                out.write_u32::<LittleEndian>(*b).unwrap();
                out.write_u32::<LittleEndian>(prod.len() as u32).unwrap();
                for &(k, c) in prod {
                    out.write_u32::<LittleEndian>(k).unwrap();
                    out.write_u8(c).unwrap();
                }
            }
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        let mut r = Cursor::new(bytes);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)
            .map_err(|_| Error::CacheFormat("truncated header".into()))?;
        if &magic != MAGIC {
            return Err(Error::CacheFormat("bad magic".into()));
        }
        let mut rd = || {
            r.read_u32::<LittleEndian>()
                .map_err(|_| Error::CacheFormat("truncated header".into()))
        };
        let header = CacheHeader {
            format_version: rd()?,
            p: rd()?,
            n: rd()?,
            d: rd()?,
            basis_count: rd()?,
        };
        if header.format_version != FORMAT_VERSION {
            return Err(Error::CacheFormat(format!(
                "unsupported format version {}",
                header.format_version
            )));
        }
        let trunc = |_| Error::CacheFormat("truncated record".into());
        let mut records = Vec::with_capacity(header.basis_count as usize);
        for _ in 0..header.basis_count {
            let left = r.read_u32::<LittleEndian>().map_err(trunc)?;
            let count = r.read_u32::<LittleEndian>().map_err(trunc)?;
            let mut products = Vec::with_capacity(count.min(1 << 16) as usize);
            for _ in 0..count {
                let b = r.read_u32::<LittleEndian>().map_err(trunc)?;
                let nnz = r.read_u32::<LittleEndian>().map_err(trunc)?;
                let mut prod = Vec::with_capacity(nnz.min(1 << 16) as usize);
                for _ in 0..nnz {
                    let k = r.read_u32::<LittleEndian>().map_err(trunc)?;
                    let c = r.read_u8().map_err(trunc)?;
                    prod.push((k, c));
                }
                products.push((b, prod));
            }
            records.push(LeftRecord { left, products });
        }
        if (r.position() as usize) != bytes.len() {
            return Err(Error::CacheFormat("trailing bytes".into()));
        }
        Ok(StructureTable { header, records })
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = serde_json::to_string(&self.header).unwrap();
        out.push('\n');
        for rec in &self.records {
            out.push_str(&serde_json::to_string(rec).unwrap());
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self> {
        let mut lines = BufReader::new(text.as_bytes()).lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::CacheFormat("empty file".into()))??;
        let header: CacheHeader = serde_json::from_str(&first)?;
        if header.format_version != FORMAT_VERSION {
            return Err(Error::CacheFormat(format!(
                "unsupported format version {}",
                header.format_version
            )));
        }
        let mut records = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(serde_json::from_str(&line)?);
        }
        if records.len() != header.basis_count as usize {
            return Err(Error::CacheFormat("record count mismatch".into()));
        }
        Ok(StructureTable { header, records })
    }
}

/// Cache file name for an algebra.
pub fn cache_file_name(p: u32, n: usize, d: usize) -> String {
    format!("schur_p{p}_n{n}_d{d}.bin")
}

/// Writes via a temporary file in the same directory followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp: PathBuf = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("cache"),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Loads the table for `alg` from `dir` if present, otherwise computes and
/// stores it. Returns whether the cache was hit.
pub fn load_or_build(alg: &SchurAlgebra, dir: &Path) -> Result<bool> {
    let path = dir.join(cache_file_name(alg.field().p(), alg.n(), alg.d()));
    if path.exists() {
        let table = StructureTable::from_binary(&fs::read(&path)?)?;
        table.load_into(alg)?;
        return Ok(true);
    }
    let table = StructureTable::compute(alg);
    write_atomic(&path, &table.to_binary())?;
    Ok(false)
}
