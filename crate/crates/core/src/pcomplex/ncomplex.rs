use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::ffalg::codec::{expect_magic, get_u32, get_u64, put_u16, put_u32, put_u64, read_matrix_body, write_matrix_body, FORMAT_VERSION};
use crate::ffalg::{BasedComplex, Basis, FFMatrix, FieldRef};

pub const NCOMPLEX_MAGIC: &[u8; 4] = b"GLCN";

/// A finite N-complex: objects in degrees `0..len`, differentials raising
/// degree by one, any N consecutive of them composing to zero.
#[derive(Clone, Debug)]
pub struct NComplex {
    order: usize,
    field: FieldRef,
    objects: Vec<Basis>,
    diffs: Vec<FFMatrix>,
}

impl NComplex {
    pub fn new(field: &FieldRef, order: usize, objects: Vec<Basis>, diffs: Vec<FFMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(field, order, objects, diffs)?;
        c.check_nilpotent()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(field: &FieldRef, order: usize, objects: Vec<Basis>, diffs: Vec<FFMatrix>) -> Result<Self> {
        if order < 2 {
            return Err(Error::Dimension(format!("order {order} is below 2")));
        }
        if diffs.len() + 1 != objects.len().max(1) {
            return Err(Error::Dimension(format!("{} objects need {} differentials", objects.len(), objects.len().saturating_sub(1))));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.ncols() != objects[k].len() || d.nrows() != objects[k + 1].len() {
                return Err(Error::Dimension(format!("differential in degree {k} has wrong shape")));
            }
        }
        Ok(NComplex { order, field: field.clone(), objects, diffs })
    }

    pub fn check_nilpotent(&self) -> Result<()> {
        for k in 0..self.len() {
            if k + self.order < self.len() && !self.d_power(k, self.order)?.is_zero() {
                return Err(Error::NotNComplex { n: self.order, degree: k });
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[Basis] {
        &self.objects
    }

    pub fn object(&self, k: usize) -> Basis {
        self.objects.get(k).cloned().unwrap_or_else(|| Basis::indexed(0))
    }

    pub fn dim(&self, k: usize) -> usize {
        self.objects.get(k).map_or(0, |b| b.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.objects.iter().map(|b| b.len()).collect()
    }

    pub fn diffs(&self) -> &[FFMatrix] {
        &self.diffs
    }

    /// Differential out of degree `k`, zero past the end.
    pub fn d(&self, k: usize) -> FFMatrix {
        self.diffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| FFMatrix::zeros(&self.field, self.object(k + 1), self.object(k)))
    }

    /// `d^s` out of degree `k`.
    pub fn d_power(&self, k: usize, s: usize) -> Result<FFMatrix> {
        let mut m = FFMatrix::identity(&self.field, self.object(k));
        for j in k..k + s {
            if j + 1 >= self.len() {
                return Ok(FFMatrix::zeros(&self.field, self.object(k + s), self.object(k)));
            }
            m = self.diffs[j].mul(&m)?;
        }
        Ok(m)
    }

    /// View as an ordinary complex; only valid for order 2.
    pub fn to_complex(&self) -> Result<BasedComplex> {
        if self.order != 2 {
            return Err(Error::OrderMismatch { order: self.order, p: 2 });
        }
        BasedComplex::new_unchecked(&self.field, self.objects.clone(), self.diffs.clone())
    }

    pub fn from_complex(c: &BasedComplex) -> NComplex {
        NComplex {
            order: 2,
            field: c.field().clone(),
            objects: c.objects().to_vec(),
            diffs: c.diffs().to_vec(),
        }
    }

    /// Degreewise direct sum.
    pub fn direct_sum(field: &FieldRef, order: usize, parts: &[NComplex]) -> Result<NComplex> {
        let len = parts.iter().map(|c| c.len()).max().unwrap_or(0);
        let objects: Vec<Basis> = (0..len).map(|k| Basis::sum(parts.iter().map(|c| c.object(k)).collect())).collect();
        let diffs = (0..len.saturating_sub(1))
            .map(|k| FFMatrix::direct_sum(field, &parts.iter().map(|c| c.d(k)).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Self::new_unchecked(field, order, objects, diffs)
    }

    pub fn write(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(NCOMPLEX_MAGIC)?;
        put_u16(w, FORMAT_VERSION)?;
        put_u32(w, self.field.p())?;
        put_u32(w, self.field.e())?;
        put_u32(w, self.order as u32)?;
        put_u64(w, self.len() as u64)?;
        for b in &self.objects {
            put_u64(w, b.len() as u64)?;
        }
        for d in &self.diffs {
            write_matrix_body(w, d)?;
        }
        Ok(())
    }

    pub fn read(r: &mut impl Read) -> Result<NComplex> {
        expect_magic(r, NCOMPLEX_MAGIC)?;
        let p = get_u32(r)?;
        let e = get_u32(r)?;
        let field = crate::ffalg::Field::new(p, e)?;
        let order = get_u32(r)? as usize;
        let len = get_u64(r)? as usize;
        let objects = (0..len).map(|_| Ok(Basis::indexed(get_u64(r)? as usize))).collect::<Result<Vec<_>>>()?;
        let mut diffs = Vec::new();
        for k in 0..len.saturating_sub(1) {
            let d = read_matrix_body(r)?;
            if d.field().q() != field.q() {
                return Err(Error::Format(format!("differential {k} over a different field")));
            }
            diffs.push(d.with_bases(objects[k + 1].clone(), objects[k].clone())?);
        }
        NComplex::new(&field, order, objects, diffs)
    }
}

/// Degreewise maps between two N-complexes (or ordinary complexes).
#[derive(Clone, Debug)]
pub struct NMap {
    pub source: NComplex,
    pub target: NComplex,
    pub maps: Vec<FFMatrix>,
}

impl NMap {
    pub fn map(&self, k: usize) -> FFMatrix {
        self.maps.get(k).cloned().unwrap_or_else(|| {
            FFMatrix::zeros(self.source.field(), self.target.object(k), self.source.object(k))
        })
    }

    /// Whether `f ∘ d = d ∘ f` in every degree.
    pub fn is_chain_map(&self) -> Result<bool> {
        let len = self.source.len().max(self.target.len());
        for k in 0..len {
            let lhs = self.map(k + 1).mul(&self.source.d(k))?;
            let rhs = self.target.d(k).mul(&self.map(k))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Degreewise maps between ordinary complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: BasedComplex,
    pub target: BasedComplex,
    pub maps: Vec<FFMatrix>,
}

impl ChainMap {
    pub fn map(&self, k: usize) -> FFMatrix {
        self.maps.get(k).cloned().unwrap_or_else(|| {
            FFMatrix::zeros(self.source.field(), self.target.object(k), self.source.object(k))
        })
    }

    pub fn is_chain_map(&self) -> Result<bool> {
        let len = self.source.len().max(self.target.len());
        for k in 0..len {
            let lhs = self.map(k + 1).mul(&self.source.d(k))?;
            let rhs = self.target.d(k).mul(&self.map(k))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        let len = first.source.len().max(self.target.len());
        let maps = (0..len).map(|k| self.map(k).mul(&first.map(k))).collect::<Result<Vec<_>>>()?;
        Ok(ChainMap { source: first.source.clone(), target: self.target.clone(), maps })
    }
}

/// Degreewise inclusion of a graded object into a complex.
#[derive(Clone, Debug)]
pub struct GradedEmbedding {
    pub source: Vec<Basis>,
    pub maps: Vec<FFMatrix>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn rejects_non_nilpotent() {
        let f = Field::prime(3).unwrap();
        let id = FFMatrix::identity(&f, Basis::indexed(1));
        let objs = vec![Basis::indexed(1); 4];
        assert!(NComplex::new(&f, 3, objs.clone(), vec![id.clone(), id.clone(), id.clone()]).is_err());
        assert!(NComplex::new(&f, 3, objs[..3].to_vec(), vec![id.clone(), id]).is_ok());
    }

    #[test]
    fn codec_roundtrip() {
        let f = Field::new(5, 2).unwrap();
        let d = FFMatrix::from_int_rows(&f, &[vec![1, 2]]).unwrap();
        let c = NComplex::new(&f, 5, vec![Basis::indexed(2), Basis::indexed(1)], vec![d]).unwrap();
        let mut buf = Vec::new();
        c.write(&mut buf).unwrap();
        let back = NComplex::read(&mut buf.as_slice()).unwrap();
        assert_eq!(back.dims(), c.dims());
        assert_eq!(back.d(0), c.d(0));
        assert_eq!(back.order(), 5);
    }
}
