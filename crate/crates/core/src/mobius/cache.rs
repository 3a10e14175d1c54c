//! Binary cache for a sieved table.
//!
//! Layout (little-endian): magic `MUTB`, version `u32`, N `u64`, then N
//! bytes of μ(n)+1 for n = 1..=N, then N `i64` values of M(n).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{trial_mu, MuTable};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: [u8; 4] = *b"MUTB";
pub const CACHE_VERSION: u32 = 1;

pub fn save_table(t: &MuTable, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&t.limit().to_le_bytes())?;
    let bytes: Vec<u8> = t.mu_values()[1..].iter().map(|&m| (m + 1) as u8).collect();
    w.write_all(&bytes)?;
    for &m in &t.mertens_values()[1..] {
        w.write_all(&m.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a cached table. The prefix-sum relation is checked everywhere and
/// μ is re-derived by trial division on a 1% random sample.
pub fn load_table(path: &Path) -> Result<MuTable> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != CACHE_MAGIC {
        return Err(Error::CacheFormat("bad magic".into()));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != CACHE_VERSION {
        return Err(Error::CacheFormat(format!("unsupported version {version}")));
    }
    let mut dword = [0u8; 8];
    r.read_exact(&mut dword)?;
    let n = u64::from_le_bytes(dword);
    if n == 0 {
        return Err(Error::ZeroSieveLimit);
    }
    let len = usize::try_from(n).map_err(|_| Error::Resource(usize::MAX))?;

    let mut raw = vec![0u8; len];
    r.read_exact(&mut raw)?;
    let mut mu = Vec::with_capacity(len + 1);
    mu.push(0i8);
    for (i, &b) in raw.iter().enumerate() {
        if b > 2 {
            return Err(Error::CacheFormat(format!("mu byte {b} at n = {}", i + 1)));
        }
        mu.push(b as i8 - 1);
    }
    drop(raw);

    let mut mertens = Vec::with_capacity(len + 1);
    mertens.push(0i64);
    let mut buf = vec![0u8; 8 * len.min(1 << 16)];
    let mut remaining = len;
    while remaining > 0 {
        let chunk = remaining.min(1 << 16);
        r.read_exact(&mut buf[..8 * chunk])?;
        mertens.extend(
            buf[..8 * chunk]
                .chunks_exact(8)
                .map(|c| i64::from_le_bytes(c.try_into().expect("8-byte chunk"))),
        );
        remaining -= chunk;
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::CacheFormat("trailing bytes after table".into()));
    }

    for k in 1..=len {
        if mertens[k] != mertens[k - 1] + i64::from(mu[k]) {
            return Err(Error::CacheFormat(format!("M(n) prefix mismatch at n = {k}")));
        }
    }

    let samples = (len / 100).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(n);
    let picks: Vec<u64> = (0..samples).map(|_| rng.gen_range(1..=n)).collect();
    let bad = picks.par_iter().find_any(|&&k| mu[k as usize] != trial_mu(k));
    if let Some(&k) = bad {
        return Err(Error::CacheFormat(format!("mu({k}) fails trial-division check")));
    }
    Ok(MuTable::from_parts(mu, mertens))
}
