//! Little-endian binary format for matrices.
//!
//! Layout: magic `GLCM`, format version (u16), then p, e (u32), rows, cols,
//! nnz (u64), followed by nnz triplets `row (u64), col (u64), e digits (u32)`.

use std::io::{Read, Write};

use super::basis::Basis;
use super::field::Field;
use super::matrix::FFMatrix;
use crate::error::{Error, Result};

pub const MATRIX_MAGIC: &[u8; 4] = b"GLCM";
pub const FORMAT_VERSION: u16 = 1;

pub(crate) fn put_u16(w: &mut impl Write, v: u16) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

pub(crate) fn put_u32(w: &mut impl Write, v: u32) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

pub(crate) fn put_u64(w: &mut impl Write, v: u64) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

pub(crate) fn get_u16(r: &mut impl Read) -> Result<u16> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

pub(crate) fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn get_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub(crate) fn expect_magic(r: &mut impl Read, magic: &[u8; 4]) -> Result<()> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    if &b != magic {
        return Err(Error::Format(format!("bad magic {b:?}")));
    }
    let v = get_u16(r)?;
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!("format version {v}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

pub fn write_matrix(w: &mut impl Write, m: &FFMatrix) -> Result<()> {
    w.write_all(MATRIX_MAGIC)?;
    put_u16(w, FORMAT_VERSION)?;
    write_matrix_body(w, m)
}

pub(crate) fn write_matrix_body(w: &mut impl Write, m: &FFMatrix) -> Result<()> {
    let f = m.field();
    put_u32(w, f.p())?;
    put_u32(w, f.e())?;
    put_u64(w, m.nrows() as u64)?;
    put_u64(w, m.ncols() as u64)?;
    let trip = m.triplets();
    put_u64(w, trip.len() as u64)?;
    for (i, j, a) in trip {
        put_u64(w, i as u64)?;
        put_u64(w, j as u64)?;
        for d in f.digits(a) {
            put_u32(w, d)?;
        }
    }
    Ok(())
}

pub fn read_matrix(r: &mut impl Read) -> Result<FFMatrix> {
    expect_magic(r, MATRIX_MAGIC)?;
    read_matrix_body(r)
}

pub(crate) fn read_matrix_body(r: &mut impl Read) -> Result<FFMatrix> {
    let p = get_u32(r)?;
    let e = get_u32(r)?;
    let f = Field::new(p, e)?;
    let rows = get_u64(r)? as usize;
    let cols = get_u64(r)? as usize;
    let nnz = get_u64(r)? as usize;
    let mut trip = Vec::with_capacity(nnz.min(1 << 20));
    let mut digits = vec![0u32; e as usize];
    for _ in 0..nnz {
        let i = get_u64(r)? as usize;
        let j = get_u64(r)? as usize;
        for d in digits.iter_mut() {
            *d = get_u32(r)?;
        }
        trip.push((i, j, f.from_digits(&digits)?));
    }
    FFMatrix::from_triplets(&f, Basis::indexed(rows), Basis::indexed(cols), trip)
}

pub fn matrix_to_bytes(m: &FFMatrix) -> Vec<u8> {
    let mut out = Vec::new();
    write_matrix(&mut out, m).expect("writing to a Vec");
    out
}

pub fn matrix_from_bytes(mut bytes: &[u8]) -> Result<FFMatrix> {
    let m = read_matrix(&mut bytes)?;
    if !bytes.is_empty() {
        return Err(Error::Format("trailing bytes".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Elem;

    #[test]
    fn roundtrip_extension_field() {
        let f = Field::new(3, 3).unwrap();
        let m = FFMatrix::from_triplets(
            &f,
            Basis::indexed(3),
            Basis::indexed(2),
            [(0, 1, Elem(26)), (2, 0, Elem(5))],
        )
        .unwrap();
        let bytes = matrix_to_bytes(&m);
        assert_eq!(&bytes[..4], MATRIX_MAGIC);
        assert_eq!(matrix_from_bytes(&bytes).unwrap(), m);
    }

    #[test]
    fn corrupted_version_rejected() {
        let f = Field::prime(2).unwrap();
        let mut bytes = matrix_to_bytes(&FFMatrix::identity(&f, Basis::indexed(2)));
        bytes[4] = 9;
        assert!(matches!(matrix_from_bytes(&bytes), Err(Error::Format(_))));
    }
}
