//! Flat binary (`SWF1`) and CSV serialization of scalar fields.
//!
//! Binary layout, all little-endian:
//!
//! | offset | size | content            |
//! |--------|------|--------------------|
//! | 0      | 4    | magic `b"SWF1"`    |
//! | 4      | 4    | `nx` (u32)         |
//! | 8      | 4    | `nz` (u32)         |
//! | 12     | 4    | reserved, zero     |
//! | 16     | 8    | `lx` (f64)         |
//! | 24     | 8    | `lz` (f64)         |
//! | 32     | 8·nx·nz | samples (f64), row-major over (x, z) |

use std::io::{Read, Write};
use std::sync::Arc;

use super::grid::{Grid, GridSpec};
use super::scalar_field::ScalarField;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const FIELD_MAGIC: [u8; 4] = *b"SWF1";
pub const FIELD_HEADER_LEN: usize = 32;

pub fn write_field<T: Real, W: Write>(field: &ScalarField<T>, mut w: W) -> Result<()> {
    let spec = field.spec();
    let mut header = [0u8; FIELD_HEADER_LEN];
    header[0..4].copy_from_slice(&FIELD_MAGIC);
    header[4..8].copy_from_slice(&(spec.nx as u32).to_le_bytes());
    header[8..12].copy_from_slice(&(spec.nz as u32).to_le_bytes());
    header[16..24].copy_from_slice(&spec.lx.to_f64_lossy().to_le_bytes());
    header[24..32].copy_from_slice(&spec.lz.to_f64_lossy().to_le_bytes());
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(8 * field.values().len());
    for v in field.values() {
        body.extend_from_slice(&v.to_f64_lossy().to_le_bytes());
    }
    w.write_all(&body)?;
    Ok(())
}

fn read_header<R: Read>(r: &mut R) -> Result<(usize, usize, f64, f64)> {
    let mut header = [0u8; FIELD_HEADER_LEN];
    r.read_exact(&mut header)?;
    if header[0..4] != FIELD_MAGIC {
        return Err(Error::Format(format!("bad field magic {:?}", &header[0..4])));
    }
    let word = |a: usize| u32::from_le_bytes(header[a..a + 4].try_into().expect("4 bytes"));
    let float = |a: usize| f64::from_le_bytes(header[a..a + 8].try_into().expect("8 bytes"));
    Ok((word(4) as usize, word(8) as usize, float(16), float(24)))
}

fn read_body<T: Real, R: Read>(r: &mut R, n: usize) -> Result<Vec<T>> {
    let mut body = vec![0u8; 8 * n];
    r.read_exact(&mut body)?;
    Ok(body
        .chunks_exact(8)
        .map(|c| T::lit(f64::from_le_bytes(c.try_into().expect("8 bytes"))))
        .collect())
}

/// Reads a field, building a fresh grid from the header.
pub fn read_field<T: Real, R: Read>(mut r: R) -> Result<ScalarField<T>> {
    let (nx, nz, lx, lz) = read_header(&mut r)?;
    let grid = Grid::new(GridSpec::new(nx, nz, T::lit(lx), T::lit(lz))?)?;
    let values = read_body(&mut r, grid.len())?;
    ScalarField::from_values(&grid, values)
}

/// Reads a field that must live on `grid`.
pub fn read_field_on<T: Real, R: Read>(grid: &Arc<Grid<T>>, mut r: R) -> Result<ScalarField<T>> {
    let (nx, nz, lx, lz) = read_header(&mut r)?;
    let spec = grid.spec();
    if nx != spec.nx || nz != spec.nz || lx != spec.lx.to_f64_lossy() || lz != spec.lz.to_f64_lossy() {
        return Err(Error::GridMismatch);
    }
    let values = read_body(&mut r, grid.len())?;
    ScalarField::from_values(grid, values)
}

/// Writes `x,z,value` rows for inspection.
pub fn write_field_csv<T: Real, W: Write>(field: &ScalarField<T>, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "z", "value"])?;
    let grid = field.grid();
    for (i, &x) in grid.xs().iter().enumerate() {
        for (j, &z) in grid.zs().iter().enumerate() {
            out.write_record([
                format!("{:e}", x.to_f64_lossy()),
                format!("{:e}", z.to_f64_lossy()),
                format!("{:e}", field.at(i, j).to_f64_lossy()),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
