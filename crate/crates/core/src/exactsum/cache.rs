//! Binary cache for jump tables.
//!
//! Layout, all little-endian: the magic `WDL1`, then `q1, a1, q2, a2,
//! weight_kind, X` as 64-bit unsigned integers, then `X` 64-bit floats
//! holding `c(1), …, c(X)`. Prefix sums are rebuilt on load.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::JumpTable;
use crate::arith::{Params, SieveConfig, WeightKind};
use crate::{Error, Result};

pub const CACHE_MAGIC: &[u8; 4] = b"WDL1";

pub fn write_cache(path: impl AsRef<Path>, table: &JumpTable) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_cache_to(&mut w, table)?;
    w.flush()?;
    Ok(())
}

pub fn write_cache_to<W: Write>(w: &mut W, table: &JumpTable) -> Result<()> {
    let p = table.params();
    w.write_all(CACHE_MAGIC)?;
    for v in [p.q1(), p.a1(), p.q2(), p.a2(), p.kind().code(), table.x_max()] {
        w.write_all(&v.to_le_bytes())?;
    }
    for c in table.jumps() {
        w.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_cache(path: impl AsRef<Path>) -> Result<JumpTable> {
    read_cache_from(&mut BufReader::new(File::open(path)?))
}

pub fn read_cache_from<R: Read>(r: &mut R) -> Result<JumpTable> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(truncated)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut header = [0u64; 6];
    let mut buf = [0u8; 8];
    for slot in header.iter_mut() {
        r.read_exact(&mut buf).map_err(truncated)?;
        *slot = u64::from_le_bytes(buf);
    }
    let [q1, a1, q2, a2, kind, x] = header;
    let params = Params::new(a1, q1, a2, q2, WeightKind::from_code(kind)?)
        .map_err(|e| Error::Format(format!("invalid parameters in header: {e}")))?;
    let x = usize::try_from(x).map_err(|_| Error::Format("X does not fit in memory".into()))?;
    let mut jumps = Vec::with_capacity(x + 1);
    jumps.push(0.0);
    for _ in 0..x {
        r.read_exact(&mut buf).map_err(truncated)?;
        jumps.push(f64::from_le_bytes(buf));
    }
    let mut probe = [0u8; 1];
    if r.read(&mut probe)? != 0 {
        return Err(Error::Format("trailing bytes after jump data".into()));
    }
    Ok(JumpTable::from_jumps(params, jumps, SieveConfig::default().block))
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Format("file truncated".into())
    } else {
        e.into()
    }
}
