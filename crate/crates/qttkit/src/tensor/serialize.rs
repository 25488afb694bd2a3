//! Versioned binary serialization of the tensor formats.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   b"QTTK"
//! version u32                      (currently 1)
//! tag     u8                       0 dense | 1 canonical | 2 tucker | 3 tt | 4 tt-matrix
//! body    per-format header, then f64 arrays in declared order
//! ```
//!
//! Per-format bodies:
//!
//! * dense:     `d:u32, dims:[u64; d], values:[f64]` (column-major)
//! * canonical: `d:u32, dims:[u64; d], rank:u64, factors` mode by mode,
//!              each `N_l × R` column-major
//! * tucker:    `d:u32, dims:[u64; d], ranks:[u64; d], orthogonal:u8,
//!              core:[f64], factors` mode by mode
//! * tt:        `d:u32, dims:[u64; d], bonds:[u64; d+1], cores` in order,
//!              each flat `(left, mode, right)` with the left bond fastest
//! * tt-matrix: `d:u32, rows:[u64; d], cols:[u64; d], bonds:[u64; d+1],
//!              cores` flat `(left, row, col, right)`
//!
//! Floats are raw IEEE-754 little-endian bit patterns, so round-trips are
//! bit-exact.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::{
    CanonicalTensor, DenseTensor, Shape, TtCore, TtMatCore, TtMatrix, TtTensor, TuckerTensor,
};

const MAGIC: &[u8; 4] = b"QTTK";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Dense = 0,
    Canonical = 1,
    Tucker = 2,
    Tt = 3,
    TtMatrix = 4,
}

fn write_header(w: &mut impl Write, tag: Tag) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[tag as u8])?;
    Ok(())
}

fn read_header(r: &mut impl Read) -> Result<u8> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Serialization("bad magic".into()));
    }
    let mut v = [0u8; 4];
    r.read_exact(&mut v)?;
    let version = u32::from_le_bytes(v);
    if version != VERSION {
        return Err(Error::Serialization(format!("unsupported version {version}")));
    }
    let mut tag = [0u8; 1];
    r.read_exact(&mut tag)?;
    Ok(tag[0])
}

fn write_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn write_u64(w: &mut impl Write, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn write_f64s(w: &mut impl Write, vs: &[f64]) -> Result<()> {
    for v in vs {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64s(r: &mut impl Read, n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    let mut b = [0u8; 8];
    for _ in 0..n {
        r.read_exact(&mut b)?;
        out.push(f64::from_le_bytes(b));
    }
    Ok(out)
}

fn write_dims(w: &mut impl Write, dims: &[usize]) -> Result<()> {
    write_u32(w, dims.len() as u32)?;
    for &d in dims {
        write_u64(w, d as u64)?;
    }
    Ok(())
}

fn read_dims(r: &mut impl Read) -> Result<Vec<usize>> {
    let d = read_u32(r)? as usize;
    if d == 0 || d > 1 << 20 {
        return Err(Error::Serialization(format!("implausible mode count {d}")));
    }
    let mut dims = Vec::with_capacity(d);
    for _ in 0..d {
        dims.push(read_u64(r)? as usize);
    }
    Ok(dims)
}

pub fn write_dense(w: &mut impl Write, t: &DenseTensor) -> Result<()> {
    write_header(w, Tag::Dense)?;
    write_dims(w, t.shape().dims())?;
    write_f64s(w, t.values())
}

pub fn read_dense(r: &mut impl Read) -> Result<DenseTensor> {
    if read_header(r)? != Tag::Dense as u8 {
        return Err(Error::Serialization("expected a dense tensor".into()));
    }
    let shape = Shape::new(read_dims(r)?)?;
    let values = read_f64s(r, shape.total())?;
    DenseTensor::from_values(shape, values)
}

pub fn write_canonical(w: &mut impl Write, t: &CanonicalTensor) -> Result<()> {
    write_header(w, Tag::Canonical)?;
    write_dims(w, t.shape().dims())?;
    write_u64(w, t.rank() as u64)?;
    for f in t.factors() {
        write_f64s(w, &f.data)?;
    }
    Ok(())
}

pub fn read_canonical(r: &mut impl Read) -> Result<CanonicalTensor> {
    if read_header(r)? != Tag::Canonical as u8 {
        return Err(Error::Serialization("expected a canonical tensor".into()));
    }
    let shape = Shape::new(read_dims(r)?)?;
    let rank = read_u64(r)? as usize;
    let mut factors = Vec::with_capacity(shape.order());
    for &n in shape.dims() {
        let data = read_f64s(r, n * rank)?;
        factors.push(Matrix::from_vec(n, rank, data));
    }
    CanonicalTensor::new(shape, factors)
}

pub fn write_tucker(w: &mut impl Write, t: &TuckerTensor) -> Result<()> {
    write_header(w, Tag::Tucker)?;
    write_dims(w, t.shape().dims())?;
    for r in t.ranks() {
        write_u64(w, r as u64)?;
    }
    w.write_all(&[u8::from(t.is_orthogonal())])?;
    write_f64s(w, t.core().values())?;
    for f in t.factors() {
        write_f64s(w, &f.data)?;
    }
    Ok(())
}

pub fn read_tucker(r: &mut impl Read) -> Result<TuckerTensor> {
    if read_header(r)? != Tag::Tucker as u8 {
        return Err(Error::Serialization("expected a tucker tensor".into()));
    }
    let shape = Shape::new(read_dims(r)?)?;
    let mut ranks = Vec::with_capacity(shape.order());
    for _ in 0..shape.order() {
        ranks.push(read_u64(r)? as usize);
    }
    let mut flag = [0u8; 1];
    r.read_exact(&mut flag)?;
    let rank_shape = Shape::new(ranks.clone())?;
    let core = DenseTensor::from_values(rank_shape, read_f64s(r, ranks.iter().product())?)?;
    let mut factors = Vec::with_capacity(shape.order());
    for (l, &n) in shape.dims().iter().enumerate() {
        factors.push(Matrix::from_vec(n, ranks[l], read_f64s(r, n * ranks[l])?));
    }
    TuckerTensor::new(shape, core, factors, flag[0] != 0)
}

pub fn write_tt(w: &mut impl Write, t: &TtTensor) -> Result<()> {
    write_header(w, Tag::Tt)?;
    write_dims(w, t.shape().dims())?;
    for b in t.bond_ranks() {
        write_u64(w, b as u64)?;
    }
    for c in t.cores() {
        write_f64s(w, &c.data)?;
    }
    Ok(())
}

pub fn read_tt(r: &mut impl Read) -> Result<TtTensor> {
    if read_header(r)? != Tag::Tt as u8 {
        return Err(Error::Serialization("expected a TT tensor".into()));
    }
    let dims = read_dims(r)?;
    let mut bonds = Vec::with_capacity(dims.len() + 1);
    for _ in 0..dims.len() + 1 {
        bonds.push(read_u64(r)? as usize);
    }
    let mut cores = Vec::with_capacity(dims.len());
    for (l, &n) in dims.iter().enumerate() {
        let (a, b) = (bonds[l], bonds[l + 1]);
        cores.push(TtCore { left: a, mode: n, right: b, data: read_f64s(r, a * n * b)? });
    }
    TtTensor::new(cores)
}

pub fn write_tt_matrix(w: &mut impl Write, t: &TtMatrix) -> Result<()> {
    write_header(w, Tag::TtMatrix)?;
    write_dims(w, t.row_shape().dims())?;
    write_dims(w, t.col_shape().dims())?;
    for b in t.bond_ranks() {
        write_u64(w, b as u64)?;
    }
    for c in t.cores() {
        write_f64s(w, &c.data)?;
    }
    Ok(())
}

pub fn read_tt_matrix(r: &mut impl Read) -> Result<TtMatrix> {
    if read_header(r)? != Tag::TtMatrix as u8 {
        return Err(Error::Serialization("expected a TT matrix".into()));
    }
    let rows = read_dims(r)?;
    let cols = read_dims(r)?;
    if rows.len() != cols.len() {
        return Err(Error::Serialization("row/col mode counts differ".into()));
    }
    let mut bonds = Vec::with_capacity(rows.len() + 1);
    for _ in 0..rows.len() + 1 {
        bonds.push(read_u64(r)? as usize);
    }
    let mut cores = Vec::with_capacity(rows.len());
    for l in 0..rows.len() {
        let (a, b) = (bonds[l], bonds[l + 1]);
        let n = a * rows[l] * cols[l] * b;
        cores.push(TtMatCore {
            left: a,
            rows: rows[l],
            cols: cols[l],
            right: b,
            data: read_f64s(r, n)?,
        });
    }
    TtMatrix::new(cores)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(x: &[f64]) -> Vec<u64> {
        x.iter().map(|v| v.to_bits()).collect()
    }

    #[test]
    fn round_trips_are_bit_exact() {
        let dense = DenseTensor::from_fn(Shape::new(vec![3, 2]).unwrap(), |i| {
            (i[0] as f64 + 0.1) / (i[1] as f64 + 0.7)
        });
        let mut buf = Vec::new();
        write_dense(&mut buf, &dense).unwrap();
        let back = read_dense(&mut buf.as_slice()).unwrap();
        assert_eq!(bits(dense.values()), bits(back.values()));

        let can = CanonicalTensor::rank_one(&[vec![1.0, 0.3], vec![-2.0, 0.5, 1e-17]]).unwrap();
        let mut buf = Vec::new();
        write_canonical(&mut buf, &can).unwrap();
        let back = read_canonical(&mut buf.as_slice()).unwrap();
        assert_eq!(bits(&can.factor(1).data), bits(&back.factor(1).data));

        let tt = TtTensor::rank_one(&[vec![0.1, 0.2], vec![1.0, -1.0], vec![3.0, 0.25]]).unwrap();
        let mut buf = Vec::new();
        write_tt(&mut buf, &tt).unwrap();
        let back = read_tt(&mut buf.as_slice()).unwrap();
        for (a, b) in tt.cores().iter().zip(back.cores()) {
            assert_eq!(bits(&a.data), bits(&b.data));
        }

        let id = TtMatrix::identity(&Shape::new(vec![2, 3]).unwrap());
        let mut buf = Vec::new();
        write_tt_matrix(&mut buf, &id).unwrap();
        let back = read_tt_matrix(&mut buf.as_slice()).unwrap();
        for (a, b) in id.cores().iter().zip(back.cores()) {
            assert_eq!(bits(&a.data), bits(&b.data));
        }
    }

    #[test]
    fn rejects_wrong_tag_and_magic() {
        let tt = TtTensor::rank_one(&[vec![1.0, 2.0]]).unwrap();
        let mut buf = Vec::new();
        write_tt(&mut buf, &tt).unwrap();
        assert!(read_dense(&mut buf.as_slice()).is_err());
        buf[0] = b'X';
        assert!(read_tt(&mut buf.as_slice()).is_err());
    }
}
