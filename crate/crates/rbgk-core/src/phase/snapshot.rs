//! Binary snapshot format for kinetic fields.
//!
//! Layout (all little-endian):
//!
//! ```text
//! bytes 0..8    magic "RBGKF001"
//! bytes 8..16   momentum cutoff, f64
//! bytes 16..20  nodes per axis N, u32
//! bytes 20..24  spatial cells C, u32 (1 for homogeneous states)
//! bytes 24..32  spatial domain length, f64
//! bytes 32..    C * N^3 values, f64, cell-major then flat node order
//! ```
//!
//! The format is deliberately free of timestamps or hostnames so that a
//! rerun of the same configuration produces byte-identical files.

use super::field::KineticField1d;
use super::grid::MomentumGrid;
use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

pub const FIELD_MAGIC: &[u8; 8] = b"RBGKF001";

pub fn write_field(w: &mut impl Write, field: &KineticField1d) -> Result<()> {
    w.write_all(FIELD_MAGIC)?;
    w.write_all(&field.grid().cutoff().to_le_bytes())?;
    w.write_all(&(field.grid().size() as u32).to_le_bytes())?;
    w.write_all(&(field.x_cells() as u32).to_le_bytes())?;
    w.write_all(&field.length().to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field(r: &mut impl Read) -> Result<KineticField1d> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != FIELD_MAGIC {
        return Err(Error::Format(format!(
            "bad field snapshot magic {:?}, expected {:?}",
            magic, FIELD_MAGIC
        )));
    }
    let mut b8 = [0u8; 8];
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b8)?;
    let cutoff = f64::from_le_bytes(b8);
    r.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let x_cells = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b8)?;
    let length = f64::from_le_bytes(b8);
    let grid = Arc::new(MomentumGrid::new(cutoff, n)?);
    let mut field = KineticField1d::zeros(grid, x_cells, length)?;
    let mut buf = vec![0u8; 8 * field.values().len()];
    r.read_exact(&mut buf)?;
    for (v, chunk) in field.values_mut().iter_mut().zip(buf.chunks_exact(8)) {
        *v = f64::from_le_bytes(chunk.try_into().unwrap());
    }
    Ok(field)
}

pub fn save_field(path: impl AsRef<Path>, field: &KineticField1d) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field(&mut w, field)?;
    w.flush()?;
    Ok(())
}

pub fn load_field(path: impl AsRef<Path>) -> Result<KineticField1d> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field(&mut r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let grid = Arc::new(MomentumGrid::new(2.5, 6).unwrap());
        let field =
            KineticField1d::from_fn(grid, 3, 1.5, |x, q, q0| x * 7.0 + q[0] - q[2] / q0).unwrap();
        let mut buf = Vec::new();
        write_field(&mut buf, &field).unwrap();
        let back = read_field(&mut buf.as_slice()).unwrap();
        assert_eq!(back.x_cells(), 3);
        assert_eq!(back.length(), 1.5);
        assert_eq!(back.grid().cutoff(), 2.5);
        assert_eq!(back.grid().size(), 6);
        assert_eq!(back.values(), field.values());
    }

    #[test]
    fn write_is_deterministic() {
        let grid = Arc::new(MomentumGrid::new(1.0, 4).unwrap());
        let field = KineticField1d::from_fn(grid, 2, 1.0, |x, q, _| x + q[1]).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_field(&mut a, &field).unwrap();
        write_field(&mut b, &field).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_wrong_magic() {
        let mut buf = b"NOTAFILE".to_vec();
        buf.extend_from_slice(&[0u8; 64]);
        assert!(matches!(read_field(&mut buf.as_slice()), Err(Error::Format(_))));
    }
}
