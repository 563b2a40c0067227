//! Dense realizations of the linearized operators, the Hilbert-Schmidt
//! kernel, and a binary export format for external inspection.
//!
//! Dense algebra is reserved for diagnostic grid sizes; assembling above
//! [`DENSE_NODE_CAP`] nodes is rejected (a 4096-node matrix already
//! holds 16.8M entries). The matrix-free [`apply_projector`] path covers
//! larger grids.

use super::equilibrium::Equilibrium0;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::{Read, Write};
use std::path::Path;

/// Largest node count dense assembly accepts.
pub const DENSE_NODE_CAP: usize = 4096;

/// Magic header of the dense binary matrix format.
pub const MATRIX_MAGIC: &[u8; 8] = b"RBGKM001";

fn dense_size(eq: &Equilibrium0) -> Result<usize> {
    let n = eq.grid().total();
    if n > DENSE_NODE_CAP {
        return Err(Error::Config(format!(
            "dense operators are capped at {DENSE_NODE_CAP} nodes, grid has {n}"
        )));
    }
    Ok(n)
}

/// Node coordinates and energies, precomputed once per assembly.
fn node_table(eq: &Equilibrium0) -> (Vec<[f64; 3]>, Vec<f64>) {
    let grid = eq.grid();
    let n = grid.total();
    let mut qs = Vec::with_capacity(n);
    let mut q0s = Vec::with_capacity(n);
    for idx in 0..n {
        let q = grid.node(idx);
        qs.push(q);
        q0s.push((1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt());
    }
    (qs, q0s)
}

/// Dense projector matrix: row i of P holds the coefficients producing
/// (P f)_i. Exactly idempotent and self-adjoint in the 1/q0-weighted
/// product, up to roundoff.
pub fn assemble_projector(eq: &Equilibrium0) -> Result<DMatrix<f64>> {
    let n = dense_size(eq)?;
    let (qs, q0s) = node_table(eq);
    let w = eq.grid().weight();
    let (ah, ph, kh, prh) = (eq.alpha_hat, eq.psi_hat, eq.kappa_hat, eq.p_hat);
    let mut rows = vec![0.0f64; n * n];
    rows.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let si = eq.sqrt_j0[i];
        let q0i = q0s[i];
        let qi = qs[i];
        for (j, entry) in row.iter_mut().enumerate() {
            let q0j = q0s[j];
            let qj = qs[j];
            let dot = qi[0] * qj[0] + qi[1] * qj[1] + qi[2] * qj[2];
            let scalar = (ph / q0j - 1.0) / kh + q0i * (ah - 1.0 / q0j) / kh + dot / (prh * q0j);
            *entry = w * si * eq.sqrt_j0[j] * scalar;
        }
    });
    Ok(DMatrix::from_row_slice(n, n, &rows))
}

/// Dense linearized collision operator L = diag(1/q0) (P - I):
/// symmetric, nonpositive, kernel spanned by the invariant basis.
pub fn assemble_linearized(eq: &Equilibrium0) -> Result<DMatrix<f64>> {
    let mut l = assemble_projector(eq)?;
    let (_, q0s) = node_table(eq);
    let n = l.nrows();
    for i in 0..n {
        l[(i, i)] -= 1.0;
    }
    for i in 0..n {
        let inv = 1.0 / q0s[i];
        for j in 0..n {
            l[(i, j)] *= inv;
        }
    }
    Ok(l)
}

/// Dense finite-rank part K = diag(1/q0) P, so that L = -diag(1/q0) + K.
pub fn assemble_compact_part(eq: &Equilibrium0) -> Result<DMatrix<f64>> {
    let mut k = assemble_projector(eq)?;
    let (_, q0s) = node_table(eq);
    let n = k.nrows();
    for i in 0..n {
        let inv = 1.0 / q0s[i];
        for j in 0..n {
            k[(i, j)] *= inv;
        }
    }
    Ok(k)
}

/// Dense Fourier-mode generator B(zeta) = L - i diag(zeta . q / q0).
pub fn assemble_mode_generator(eq: &Equilibrium0, zeta: [f64; 3]) -> Result<DMatrix<Complex64>> {
    let l = assemble_linearized(eq)?;
    let (qs, q0s) = node_table(eq);
    let n = l.nrows();
    let mut b = DMatrix::from_fn(n, n, |i, j| Complex64::new(l[(i, j)], 0.0));
    for i in 0..n {
        let phase = (zeta[0] * qs[i][0] + zeta[1] * qs[i][1] + zeta[2] * qs[i][2]) / q0s[i];
        b[(i, i)] -= Complex64::new(0.0, phase);
    }
    Ok(b)
}

/// Closed-form kernel of the finite-rank part: K f(q) = integral
/// k(q, q1) f(q1) dq1. Uses the same grid-summed constants as the
/// assembled operators, so quadrature of the kernel reproduces
/// diag(1/q0) P to roundoff.
pub fn hs_kernel(eq: &Equilibrium0, q: [f64; 3], q1: [f64; 3]) -> f64 {
    let q0 = (1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    let q10 = (1.0 + q1[0] * q1[0] + q1[1] * q1[1] + q1[2] * q1[2]).sqrt();
    let dot = q[0] * q1[0] + q[1] * q1[1] + q[2] * q1[2];
    let brace = (1.0 - eq.alpha_hat * (eq.psi_hat - q0) / eq.kappa_hat)
        + (eq.psi_hat - q0) / (eq.kappa_hat * q10)
        + dot / (eq.p_hat * q10);
    eq.sqrt_j0_at(q) * eq.sqrt_j0_at(q1) / q0 * brace
}

/// Dense matrix of the kernel action: entries weight * k(q_i, q_j).
pub fn assemble_hs_matrix(eq: &Equilibrium0) -> Result<DMatrix<f64>> {
    let n = dense_size(eq)?;
    let (qs, _) = node_table(eq);
    let w = eq.grid().weight();
    let mut rows = vec![0.0f64; n * n];
    rows.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = w * hs_kernel(eq, qs[i], qs[j]);
        }
    });
    Ok(DMatrix::from_row_slice(n, n, &rows))
}

/// Writes a named dense matrix in the `RBGKM001` layout: magic, u32
/// name length + UTF-8 name, u64 rows, u64 cols, a zero kind byte, then
/// row-major little-endian f64 entries.
pub fn write_matrix(path: &Path, name: &str, m: &DMatrix<f64>) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(MATRIX_MAGIC)?;
    let name_bytes = name.as_bytes();
    out.write_all(&(name_bytes.len() as u32).to_le_bytes())?;
    out.write_all(name_bytes)?;
    out.write_all(&(m.nrows() as u64).to_le_bytes())?;
    out.write_all(&(m.ncols() as u64).to_le_bytes())?;
    out.write_all(&[0u8])?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.write_all(&m[(i, j)].to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a matrix written by [`write_matrix`].
pub fn read_matrix(path: &Path) -> Result<(String, DMatrix<f64>)> {
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    file.read_exact(&mut magic)?;
    if &magic != MATRIX_MAGIC {
        return Err(Error::Format(format!("bad matrix magic {magic:?}")));
    }
    let mut b4 = [0u8; 4];
    file.read_exact(&mut b4)?;
    let name_len = u32::from_le_bytes(b4) as usize;
    if name_len > 4096 {
        return Err(Error::Format(format!("implausible name length {name_len}")));
    }
    let mut name = vec![0u8; name_len];
    file.read_exact(&mut name)?;
    let name = String::from_utf8(name).map_err(|e| Error::Format(e.to_string()))?;
    let mut b8 = [0u8; 8];
    file.read_exact(&mut b8)?;
    let rows = u64::from_le_bytes(b8) as usize;
    file.read_exact(&mut b8)?;
    let cols = u64::from_le_bytes(b8) as usize;
    let mut kind = [0u8; 1];
    file.read_exact(&mut kind)?;
    if kind[0] != 0 {
        return Err(Error::Format(format!("unsupported element kind {}", kind[0])));
    }
    if rows.saturating_mul(cols) > 64_000_000 {
        return Err(Error::Format(format!("refusing to read {rows} x {cols} matrix")));
    }
    let mut data = vec![0.0f64; rows * cols];
    for v in data.iter_mut() {
        file.read_exact(&mut b8)?;
        *v = f64::from_le_bytes(b8);
    }
    Ok((name, DMatrix::from_row_slice(rows, cols, &data)))
}
