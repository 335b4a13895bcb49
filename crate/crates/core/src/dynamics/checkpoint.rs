//! Checkpoint files: a 64-byte header followed by the `v`, `ρ`, `ψ`, `ζ`
//! fields in the `SWF1` layout of [`crate::field::io`].
//!
//! Header (little-endian): magic `b"SWC1"`, `nx` u32, `nz` u32, reserved u32,
//! then `lx`, `lz`, `t`, `f`, `N`, `g` as f64.

use std::io::{Read, Write};

use super::params::PhysicalParams;
use super::state::FlowState;
use crate::error::{Error, Result};
use crate::field::io::{read_field_on, write_field};
use crate::field::{Grid, GridSpec};
use crate::scalar::Real;

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"SWC1";
pub const CHECKPOINT_HEADER_LEN: usize = 64;

pub fn write_checkpoint<T: Real, W: Write>(state: &FlowState<T>, params: &PhysicalParams<T>, mut w: W) -> Result<()> {
    let spec = state.grid().spec();
    let mut h = [0u8; CHECKPOINT_HEADER_LEN];
    h[0..4].copy_from_slice(&CHECKPOINT_MAGIC);
    h[4..8].copy_from_slice(&(spec.nx as u32).to_le_bytes());
    h[8..12].copy_from_slice(&(spec.nz as u32).to_le_bytes());
    for (slot, v) in [spec.lx, spec.lz, state.t, params.f, params.n, params.g].into_iter().enumerate() {
        let at = 16 + 8 * slot;
        h[at..at + 8].copy_from_slice(&v.to_f64_lossy().to_le_bytes());
    }
    w.write_all(&h)?;
    for f in [&state.v, &state.rho, &state.psi, &state.zeta] {
        write_field(f, &mut w)?;
    }
    Ok(())
}

pub fn read_checkpoint<T: Real, R: Read>(mut r: R) -> Result<(FlowState<T>, PhysicalParams<T>)> {
    let mut h = [0u8; CHECKPOINT_HEADER_LEN];
    r.read_exact(&mut h)?;
    if h[0..4] != CHECKPOINT_MAGIC {
        return Err(Error::Format(format!("bad checkpoint magic {:?}", &h[0..4])));
    }
    let word = |a: usize| u32::from_le_bytes(h[a..a + 4].try_into().expect("4 bytes")) as usize;
    let float = |slot: usize| {
        let at = 16 + 8 * slot;
        T::lit(f64::from_le_bytes(h[at..at + 8].try_into().expect("8 bytes")))
    };
    let grid = Grid::new(GridSpec::new(word(4), word(8), float(0), float(1))?)?;
    let t = float(2);
    let params = PhysicalParams::new(float(3), float(4), float(5))?;
    let v = read_field_on(&grid, &mut r)?;
    let rho = read_field_on(&grid, &mut r)?;
    let psi = read_field_on(&grid, &mut r)?;
    let zeta = read_field_on(&grid, &mut r)?;
    Ok((FlowState { t, v, rho, psi, zeta }, params))
}
