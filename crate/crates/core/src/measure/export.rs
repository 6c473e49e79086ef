//! CSV and binary dumps of lattice measures.
//!
//! Binary layout, all little-endian:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4     | magic `SSLM` |
//! | 4     | format version `u32` (= 1) |
//! | 4     | level `u32` |
//! | 8     | base `u64` |
//! | 16    | lattice denominator `u128` |
//! | 16    | mass denominator `u128` |
//! | 8     | atom count `u64` |
//! | 24 each | atom: offset `i64`, mass numerator `u128` |

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::measure::lattice::LatticeMeasure;

const MAGIC: &[u8; 4] = b"SSLM";
const VERSION: u32 = 1;

/// `offset,numerator,denominator` rows; positions are `offset / lattice_denominator`.
pub fn write_csv_exact<W: Write>(meas: &LatticeMeasure, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# level={} base={} lattice_denominator={}",
        meas.level(),
        meas.base(),
        meas.lattice_denominator()
    )?;
    writeln!(out, "offset,numerator,denominator")?;
    for (off, c) in meas.offsets().iter().zip(meas.numerators()) {
        writeln!(out, "{off},{c},{}", meas.mass_denominator())?;
    }
    Ok(())
}

/// `position,mass` rows in floating point.
pub fn write_csv_float<W: Write>(meas: &LatticeMeasure, mut out: W) -> Result<()> {
    writeln!(out, "position,mass")?;
    for k in 0..meas.len() {
        writeln!(out, "{:?},{:?}", meas.position_f64(k), meas.mass_f64(k))?;
    }
    Ok(())
}

pub fn write_binary<W: Write>(meas: &LatticeMeasure, mut out: W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(meas.level() as u32).to_le_bytes())?;
    out.write_all(&meas.base().to_le_bytes())?;
    out.write_all(&meas.lattice_denominator().to_le_bytes())?;
    out.write_all(&meas.mass_denominator().to_le_bytes())?;
    out.write_all(&(meas.len() as u64).to_le_bytes())?;
    for (off, c) in meas.offsets().iter().zip(meas.numerators()) {
        out.write_all(&off.to_le_bytes())?;
        out.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

fn take<const N: usize, R: Read>(input: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input
        .read_exact(&mut buf)
        .map_err(|e| Error::Parse(format!("truncated measure dump: {e}")))?;
    Ok(buf)
}

pub fn read_binary<R: Read>(mut input: R) -> Result<LatticeMeasure> {
    if &take::<4, _>(&mut input)? != MAGIC {
        return Err(Error::Parse("not a lattice measure dump".into()));
    }
    let version = u32::from_le_bytes(take(&mut input)?);
    if version != VERSION {
        return Err(Error::Parse(format!("unsupported dump version {version}")));
    }
    let level = u32::from_le_bytes(take(&mut input)?) as usize;
    let base = u64::from_le_bytes(take(&mut input)?);
    let lattice_den = u128::from_le_bytes(take(&mut input)?);
    let mass_den = u128::from_le_bytes(take(&mut input)?);
    let count = u64::from_le_bytes(take(&mut input)?) as usize;
    let mut offsets = Vec::with_capacity(count.min(1 << 24));
    let mut numerators = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        offsets.push(i64::from_le_bytes(take(&mut input)?));
        numerators.push(u128::from_le_bytes(take(&mut input)?));
    }
    LatticeMeasure::from_parts(level, base, lattice_den, mass_den, offsets, numerators)
}
