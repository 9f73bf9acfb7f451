use std::fmt;

use super::basis::Basis;
use super::field::{Elem, FieldRef};
use super::linalg;
use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices, nonzero values.
pub type SpVec = Vec<(u32, Elem)>;

const DENSE_FILL: f64 = 0.3;

#[derive(Clone)]
enum Store {
    Sparse(Vec<SpVec>),
    Dense(Vec<Elem>),
}

/// A matrix over GF(q) mapping the column basis into the row basis.
/// Stored by columns, sparse unless the fill exceeds 30%.
#[derive(Clone)]
pub struct FFMatrix {
    field: FieldRef,
    rows: Basis,
    cols: Basis,
    store: Store,
}

/// Sorts, merges duplicate indices and drops zeros.
pub fn normalize(field: &FieldRef, mut v: SpVec) -> SpVec {
    v.sort_unstable_by_key(|t| t.0);
    let mut out: SpVec = Vec::with_capacity(v.len());
    for (i, a) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = field.add(last.1, a),
            _ => out.push((i, a)),
        }
    }
    out.retain(|t| !t.1.is_zero());
    out
}

/// `a + c*b` for sparse vectors.
pub fn axpy(field: &FieldRef, a: &SpVec, c: Elem, b: &SpVec) -> SpVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.mul(c, b[j].1)));
            j += 1;
        } else {
            let s = field.add(a[i].1, field.mul(c, b[j].1));
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(field: &FieldRef, c: Elem, v: &SpVec) -> SpVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|&(i, a)| (i, field.mul(c, a))).collect()
}

/// Dense accumulator with a touched list, reused across columns.
pub(crate) struct Accumulator {
    vals: Vec<Elem>,
    touched: Vec<u32>,
}

impl Accumulator {
    pub(crate) fn new(n: usize) -> Self {
        Accumulator { vals: vec![Elem::ZERO; n], touched: Vec::new() }
    }

    #[inline]
    pub(crate) fn add(&mut self, field: &FieldRef, i: u32, a: Elem) {
        let slot = &mut self.vals[i as usize];
        if slot.is_zero() {
            self.touched.push(i);
        }
        *slot = field.add(*slot, a);
    }

    pub(crate) fn drain(&mut self) -> SpVec {
        self.touched.sort_unstable();
        self.touched.dedup();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = std::mem::take(&mut self.vals[i as usize]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

impl FFMatrix {
    pub fn zeros(field: &FieldRef, rows: Basis, cols: Basis) -> Self {
        let n = cols.len();
        FFMatrix { field: field.clone(), rows, cols, store: Store::Sparse(vec![Vec::new(); n]) }
    }

    pub fn identity(field: &FieldRef, basis: Basis) -> Self {
        let cols = (0..basis.len() as u32).map(|i| vec![(i, Elem::ONE)]).collect();
        FFMatrix { field: field.clone(), rows: basis.clone(), cols: basis, store: Store::Sparse(cols) }
    }

    /// Columns must already be normalized (see [`normalize`]).
    pub fn from_columns(field: &FieldRef, rows: Basis, cols: Basis, columns: Vec<SpVec>) -> Result<Self> {
        if columns.len() != cols.len() {
            return Err(Error::Dimension(format!("{} columns for a basis of {}", columns.len(), cols.len())));
        }
        for c in &columns {
            if let Some(&(i, _)) = c.last() {
                if i as usize >= rows.len() {
                    return Err(Error::Dimension(format!("row {i} out of range {}", rows.len())));
                }
            }
            debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|t| !t.1.is_zero()));
        }
        let mut m = FFMatrix { field: field.clone(), rows, cols, store: Store::Sparse(columns) };
        m.rebalance();
        Ok(m)
    }

    pub fn from_triplets(
        field: &FieldRef,
        rows: Basis,
        cols: Basis,
        triplets: impl IntoIterator<Item = (usize, usize, Elem)>,
    ) -> Result<Self> {
        let mut columns: Vec<SpVec> = vec![Vec::new(); cols.len()];
        for (r, c, a) in triplets {
            if r >= rows.len() || c >= cols.len() {
                return Err(Error::Dimension(format!("entry ({r},{c}) outside {}x{}", rows.len(), cols.len())));
            }
            columns[c].push((r as u32, a));
        }
        let columns = columns.into_iter().map(|c| normalize(field, c)).collect();
        Self::from_columns(field, rows, cols, columns)
    }

    /// Row-major dense input with integer entries reduced into the field.
    pub fn from_int_rows(field: &FieldRef, rows: &[Vec<i64>]) -> Result<Self> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != nc) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)))
            .map(|(i, j, v)| (i, j, field.from_int(v)));
        Self::from_triplets(field, Basis::indexed(nr), Basis::indexed(nc), trip)
    }

    pub fn from_elem_rows(field: &FieldRef, rows: &[Vec<Elem>], ncols: usize) -> Result<Self> {
        let trip = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        Self::from_triplets(field, Basis::indexed(rows.len()), Basis::indexed(ncols), trip)
    }

    fn rebalance(&mut self) {
        let (r, c) = (self.rows.len(), self.cols.len());
        let cells = r * c;
        let nnz = self.nnz();
        let want_dense = cells > 0 && nnz as f64 > DENSE_FILL * cells as f64 && cells <= 1 << 26;
        match (&self.store, want_dense) {
            (Store::Sparse(cols), true) => {
                let mut d = vec![Elem::ZERO; cells];
                for (j, col) in cols.iter().enumerate() {
                    for &(i, a) in col {
                        d[j * r + i as usize] = a;
                    }
                }
                self.store = Store::Dense(d);
            }
            (Store::Dense(_), false) => {
                let cols = (0..c).map(|j| self.column(j)).collect();
                self.store = Store::Sparse(cols);
            }
            _ => {}
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_basis(&self) -> &Basis {
        &self.rows
    }

    pub fn col_basis(&self) -> &Basis {
        &self.cols
    }

    pub fn with_bases(mut self, rows: Basis, cols: Basis) -> Result<Self> {
        if rows.len() != self.nrows() || cols.len() != self.ncols() {
            return Err(Error::Dimension("relabeling changes shape".into()));
        }
        self.rows = rows;
        self.cols = cols;
        Ok(self)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.store {
            Store::Sparse(cols) => cols.iter().map(|c| c.len()).sum(),
            Store::Dense(d) => d.iter().filter(|a| !a.is_zero()).count(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        match &self.store {
            Store::Sparse(cols) => cols[c]
                .binary_search_by_key(&(r as u32), |t| t.0)
                .map_or(Elem::ZERO, |k| cols[c][k].1),
            Store::Dense(d) => d[c * self.rows.len() + r],
        }
    }

    pub fn column(&self, c: usize) -> SpVec {
        match &self.store {
            Store::Sparse(cols) => cols[c].clone(),
            Store::Dense(d) => {
                let r = self.rows.len();
                d[c * r..(c + 1) * r]
                    .iter()
                    .enumerate()
                    .filter(|t| !t.1.is_zero())
                    .map(|(i, &a)| (i as u32, a))
                    .collect()
            }
        }
    }

    pub fn for_each_in_column(&self, c: usize, mut f: impl FnMut(u32, Elem)) {
        match &self.store {
            Store::Sparse(cols) => cols[c].iter().for_each(|&(i, a)| f(i, a)),
            Store::Dense(d) => {
                let r = self.rows.len();
                for (i, &a) in d[c * r..(c + 1) * r].iter().enumerate() {
                    if !a.is_zero() {
                        f(i as u32, a)
                    }
                }
            }
        }
    }

    pub fn columns(&self) -> Vec<SpVec> {
        (0..self.ncols()).map(|c| self.column(c)).collect()
    }

    pub fn rows_sparse(&self) -> Vec<SpVec> {
        let mut rows: Vec<SpVec> = vec![Vec::new(); self.nrows()];
        for c in 0..self.ncols() {
            self.for_each_in_column(c, |i, a| rows[i as usize].push((c as u32, a)));
        }
        rows
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Elem)> {
        let mut out = Vec::with_capacity(self.nnz());
        for c in 0..self.ncols() {
            self.for_each_in_column(c, |i, a| out.push((i as usize, c, a)));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Sparse(cols) => cols.iter().all(|c| c.is_empty()),
            Store::Dense(d) => d.iter().all(|a| a.is_zero()),
        }
    }

    fn check_field(&self, other: &FFMatrix) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn mul(&self, other: &FFMatrix) -> Result<FFMatrix> {
        self.check_field(other)?;
        if self.ncols() != other.nrows() {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        let f = &self.field;
        let mut acc = Accumulator::new(self.nrows());
        let mut cols = Vec::with_capacity(other.ncols());
        for j in 0..other.ncols() {
            other.for_each_in_column(j, |k, b| {
                self.for_each_in_column(k as usize, |i, a| acc.add(f, i, f.mul(a, b)));
            });
            cols.push(acc.drain());
        }
        Self::from_columns(f, self.rows.clone(), other.cols.clone(), cols)
    }

    pub fn apply(&self, v: &SpVec) -> SpVec {
        let f = &self.field;
        let mut acc = Accumulator::new(self.nrows());
        for &(k, b) in v {
            self.for_each_in_column(k as usize, |i, a| acc.add(f, i, f.mul(a, b)));
        }
        acc.drain()
    }

    pub fn add(&self, other: &FFMatrix) -> Result<FFMatrix> {
        self.lin_comb(Elem::ONE, other, Elem::ONE)
    }

    pub fn sub(&self, other: &FFMatrix) -> Result<FFMatrix> {
        let minus = self.field.neg(Elem::ONE);
        self.lin_comb(Elem::ONE, other, minus)
    }

    /// `a*self + b*other`
    pub fn lin_comb(&self, a: Elem, other: &FFMatrix, b: Elem) -> Result<FFMatrix> {
        self.check_field(other)?;
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Err(Error::Dimension("sum of differently shaped matrices".into()));
        }
        let f = &self.field;
        let cols = (0..self.ncols())
            .map(|c| axpy(f, &scale(f, a, &self.column(c)), b, &other.column(c)))
            .collect();
        Self::from_columns(f, self.rows.clone(), self.cols.clone(), cols)
    }

    pub fn scaled(&self, a: Elem) -> FFMatrix {
        let f = &self.field;
        let cols = (0..self.ncols()).map(|c| scale(f, a, &self.column(c))).collect();
        Self::from_columns(f, self.rows.clone(), self.cols.clone(), cols).expect("same shape")
    }

    pub fn neg(&self) -> FFMatrix {
        self.scaled(self.field.neg(Elem::ONE))
    }

    pub fn transpose(&self) -> FFMatrix {
        Self::from_columns(&self.field, self.cols.clone(), self.rows.clone(), self.rows_sparse()).expect("same shape")
    }

    /// Entrywise map, e.g. Frobenius twist.
    pub fn map_entries(&self, g: impl Fn(Elem) -> Elem) -> FFMatrix {
        let cols = (0..self.ncols())
            .map(|c| self.column(c).into_iter().map(|(i, a)| (i, g(a))).filter(|t| !t.1.is_zero()).collect())
            .collect();
        Self::from_columns(&self.field, self.rows.clone(), self.cols.clone(), cols).expect("same shape")
    }

    /// Kronecker product; row/column index of `self` is the major one.
    pub fn kron(&self, other: &FFMatrix) -> Result<FFMatrix> {
        self.check_field(other)?;
        let f = &self.field;
        let (r2, c2) = (other.nrows() as u32, other.ncols());
        let ocols = other.columns();
        let mut cols = Vec::with_capacity(self.ncols() * c2);
        for c1 in 0..self.ncols() {
            let a = self.column(c1);
            for ocol in &ocols {
                let mut v = Vec::with_capacity(a.len() * ocol.len());
                for &(i, x) in &a {
                    for &(k, y) in ocol {
                        v.push((i * r2 + k, f.mul(x, y)));
                    }
                }
                cols.push(v);
            }
        }
        Self::from_columns(f, Basis::tensor(&self.rows, &other.rows), Basis::tensor(&self.cols, &other.cols), cols)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(field: &FieldRef, blocks: &[FFMatrix]) -> Result<FFMatrix> {
        let mut cols = Vec::new();
        let mut roff = 0u32;
        for b in blocks {
            for c in 0..b.ncols() {
                cols.push(b.column(c).into_iter().map(|(i, a)| (i + roff, a)).collect());
            }
            roff += b.nrows() as u32;
        }
        let rows = Basis::sum(blocks.iter().map(|b| b.rows.clone()).collect());
        let colb = Basis::sum(blocks.iter().map(|b| b.cols.clone()).collect());
        Self::from_columns(field, rows, colb, cols)
    }

    /// Assemble from blocks `(i, j, M)` placed at row block i, column block j.
    pub fn from_blocks(field: &FieldRef, rows: &[Basis], cols: &[Basis], blocks: &[(usize, usize, FFMatrix)]) -> Result<FFMatrix> {
        let roff: Vec<usize> = offsets(rows.iter().map(|b| b.len()));
        let coff: Vec<usize> = offsets(cols.iter().map(|b| b.len()));
        let total_c = *coff.last().unwrap();
        let mut columns: Vec<SpVec> = vec![Vec::new(); total_c];
        for (i, j, m) in blocks {
            if m.nrows() != rows[*i].len() || m.ncols() != cols[*j].len() {
                return Err(Error::Dimension(format!("block ({i},{j}) has wrong shape")));
            }
            for c in 0..m.ncols() {
                let col = &mut columns[coff[*j] + c];
                m.for_each_in_column(c, |r, a| col.push((r + roff[*i] as u32, a)));
            }
        }
        let columns = columns.into_iter().map(|c| normalize(field, c)).collect();
        Self::from_columns(field, Basis::sum(rows.to_vec()), Basis::sum(cols.to_vec()), columns)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> FFMatrix {
        let columns = cols
            .clone()
            .map(|c| {
                self.column(c)
                    .into_iter()
                    .filter(|t| rows.contains(&(t.0 as usize)))
                    .map(|(i, a)| (i - rows.start as u32, a))
                    .collect()
            })
            .collect();
        Self::from_columns(&self.field, Basis::indexed(rows.len()), Basis::indexed(cols.len()), columns)
            .expect("in range")
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![vec![Elem::ZERO; self.ncols()]; self.nrows()];
        for (i, j, a) in self.triplets() {
            out[i][j] = a;
        }
        out
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self)
    }

    pub fn kernel(&self) -> Vec<SpVec> {
        linalg::kernel(self)
    }

    pub fn inverse(&self) -> Result<FFMatrix> {
        linalg::inverse(self)
    }
}

pub(crate) fn offsets(lens: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for l in lens {
        let last = *out.last().unwrap();
        out.push(last + l);
    }
    out
}

impl PartialEq for FFMatrix {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.nrows() == other.nrows()
            && self.ncols() == other.ncols()
            && (0..self.ncols()).all(|c| self.column(c) == other.column(c))
    }
}

impl fmt::Debug for FFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FFMatrix {}x{} over GF({})", self.nrows(), self.ncols(), self.field.q())?;
        if self.nrows() * self.ncols() <= 400 {
            for row in self.to_dense_rows() {
                writeln!(f, "  {:?}", row.iter().map(|a| a.raw()).collect::<Vec<_>>())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn product_matches_dense_oracle() {
        let f = Field::prime(5).unwrap();
        let a = FFMatrix::from_int_rows(&f, &[vec![1, 2, 0], vec![0, 3, 4]]).unwrap();
        let b = FFMatrix::from_int_rows(&f, &[vec![1, 0], vec![2, 1], vec![4, 4]]).unwrap();
        let c = a.mul(&b).unwrap();
        // [1*1+2*2, 2] ; [3*2+4*4, 3+16]
        assert_eq!(c, FFMatrix::from_int_rows(&f, &[vec![5, 2], vec![22, 19]]).unwrap());
    }

    #[test]
    fn dense_and_sparse_storage_agree() {
        let f = Field::prime(3).unwrap();
        let full = FFMatrix::from_int_rows(&f, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(full.is_dense());
        let sparse = FFMatrix::from_int_rows(&f, &[vec![1, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 0]]).unwrap();
        assert!(!sparse.is_dense());
        assert_eq!(full.transpose().transpose(), full);
        assert_eq!(full.get(0, 1).raw(), 2);
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let f = Field::new(2, 3).unwrap();
        let i2 = FFMatrix::identity(&f, Basis::indexed(2));
        let i3 = FFMatrix::identity(&f, Basis::indexed(3));
        assert_eq!(i2.kron(&i3).unwrap(), FFMatrix::identity(&f, Basis::indexed(6)));
    }
}
