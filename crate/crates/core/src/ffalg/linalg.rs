use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::field::{Elem, FieldRef};
use super::matrix::{FFMatrix, SpVec};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Incremental row echelon form. Each stored row has leading coefficient 1
/// and is zero in every pivot column that existed when it was inserted.
pub struct Echelon {
    field: FieldRef,
    pivot_row: Vec<u32>,
    rows: Vec<SpVec>,
    scratch: Vec<Elem>,
    heap: BinaryHeap<Reverse<u32>>,
}

/// Reduced row echelon form: `rows[i]` has pivot `pivots[i]`, pivots increasing.
#[derive(Clone, Debug)]
pub struct Rref {
    pub ncols: usize,
    pub pivots: Vec<u32>,
    pub rows: Vec<SpVec>,
}

impl Echelon {
    pub fn new(field: &FieldRef, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            pivot_row: vec![NONE; ncols],
            rows: Vec::new(),
            scratch: vec![Elem::ZERO; ncols],
            heap: BinaryHeap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.pivot_row.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row[c] != NONE
    }

    /// Residual of `v` after clearing every pivot column.
    pub fn reduce(&mut self, v: &SpVec) -> SpVec {
        let f = self.field.clone();
        for &(i, a) in v {
            self.scratch[i as usize] = a;
            self.heap.push(Reverse(i));
        }
        let mut out = Vec::new();
        let mut last = NONE;
        while let Some(Reverse(c)) = self.heap.pop() {
            if c == last {
                continue;
            }
            last = c;
            let a = std::mem::take(&mut self.scratch[c as usize]);
            if a.is_zero() {
                continue;
            }
            let r = self.pivot_row[c as usize];
            if r == NONE {
                out.push((c, a));
                continue;
            }
            let na = f.neg(a);
            for &(j, b) in &self.rows[r as usize][1..] {
                let s = &mut self.scratch[j as usize];
                if s.is_zero() {
                    self.heap.push(Reverse(j));
                }
                *s = f.mul_add(*s, na, b);
            }
        }
        out
    }

    /// Inserts `v`; returns the new pivot column when `v` is independent.
    pub fn insert(&mut self, v: &SpVec) -> Option<u32> {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    /// Inserts a vector already returned by [`Echelon::reduce`].
    pub fn insert_reduced(&mut self, r: SpVec) -> Option<u32> {
        let &(c, lead) = r.first()?;
        let inv = self.field.inv(lead).expect("nonzero lead");
        let row = r.into_iter().map(|(i, a)| (i, self.field.mul(inv, a))).collect();
        self.pivot_row[c as usize] = self.rows.len() as u32;
        self.rows.push(row);
        Some(c)
    }

    pub fn into_rref(mut self) -> Rref {
        let f = self.field.clone();
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i][0].0);
        // back-substitute from the rightmost pivot
        for &i in order.iter().rev() {
            let row = std::mem::take(&mut self.rows[i]);
            let needs = row[1..].iter().any(|&(j, _)| self.pivot_row[j as usize] != NONE);
            if !needs {
                self.rows[i] = row;
                continue;
            }
            let c0 = row[0].0;
            for &(j, a) in &row {
                self.scratch[j as usize] = a;
            }
            let mut touched: Vec<u32> = row.iter().map(|t| t.0).collect();
            for &(j, _) in &row[1..] {
                let pr = self.pivot_row[j as usize];
                if pr == NONE {
                    continue;
                }
                let a = std::mem::take(&mut self.scratch[j as usize]);
                if a.is_zero() {
                    continue;
                }
                let na = f.neg(a);
                for &(k, b) in &self.rows[pr as usize][1..] {
                    let s = &mut self.scratch[k as usize];
                    if s.is_zero() {
                        touched.push(k);
                    }
                    *s = f.mul_add(*s, na, b);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::with_capacity(touched.len());
            for k in touched {
                let a = std::mem::take(&mut self.scratch[k as usize]);
                if !a.is_zero() {
                    out.push((k, a));
                }
            }
            debug_assert_eq!(out[0].0, c0);
            self.rows[i] = out;
        }
        let pivots = order.iter().map(|&i| self.rows[i][0].0).collect();
        let rows = order.into_iter().map(|i| std::mem::take(&mut self.rows[i])).collect();
        Rref { ncols: self.pivot_row.len(), pivots, rows }
    }
}

impl Rref {
    pub fn of_rows(field: &FieldRef, ncols: usize, rows: &[SpVec]) -> Rref {
        let mut e = Echelon::new(field, ncols);
        for r in rows {
            e.insert(r);
        }
        e.into_rref()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the null space of the row space, one vector per free column,
    /// free columns in increasing order.
    pub fn null_space(&self, field: &FieldRef) -> Vec<SpVec> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p as usize] = true;
        }
        let mut index_of_free = vec![NONE; self.ncols];
        let mut free = Vec::new();
        for c in 0..self.ncols {
            if !is_pivot[c] {
                index_of_free[c] = free.len() as u32;
                free.push(c as u32);
            }
        }
        let mut vecs: Vec<SpVec> = vec![Vec::new(); free.len()];
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            for &(j, a) in &row[1..] {
                let k = index_of_free[j as usize];
                if k != NONE {
                    vecs[k as usize].push((p, field.neg(a)));
                }
            }
        }
        for (k, v) in vecs.iter_mut().enumerate() {
            v.push((free[k], Elem::ONE));
            v.sort_unstable_by_key(|t| t.0);
        }
        vecs
    }

    /// Coordinates of `v` in the row basis, assuming `v` lies in the span.
    pub fn coordinates(&self, v: &SpVec) -> SpVec {
        let pos: HashMap<u32, u32> = self.pivots.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
        v.iter().filter_map(|&(j, a)| pos.get(&j).map(|&i| (i, a))).collect()
    }
}

pub fn rank(m: &FFMatrix) -> usize {
    let f = m.field();
    if m.nrows() <= m.ncols() {
        let mut e = Echelon::new(f, m.nrows());
        for c in 0..m.ncols() {
            e.insert(&m.column(c));
            if e.rank() == m.nrows() {
                break;
            }
        }
        e.rank()
    } else {
        let mut e = Echelon::new(f, m.ncols());
        for r in m.rows_sparse() {
            e.insert(&r);
            if e.rank() == m.ncols() {
                break;
            }
        }
        e.rank()
    }
}

pub fn rref(m: &FFMatrix) -> Rref {
    Rref::of_rows(m.field(), m.ncols(), &m.rows_sparse())
}

/// Kernel basis from the free columns of the reduced row echelon form.
pub fn kernel(m: &FFMatrix) -> Vec<SpVec> {
    rref(m).null_space(m.field())
}

/// Kernel of the matrix with the given columns, split into connected
/// components of the column/row incidence graph. Same result as [`kernel`].
pub fn kernel_of_columns(field: &FieldRef, nrows: usize, cols: &[SpVec]) -> Vec<SpVec> {
    let mut parent: Vec<u32> = (0..nrows as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for c in cols {
        if let Some(&(r0, _)) = c.first() {
            let a = find(&mut parent, r0);
            for &(r, _) in &c[1..] {
                let b = find(&mut parent, r);
                if a != b {
                    parent[b as usize] = a;
                }
            }
        }
    }
    let mut groups: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        match c.first() {
            None => out.push(vec![(j as u32, Elem::ONE)]),
            Some(&(r0, _)) => groups.entry(find(&mut parent, r0)).or_default().push(j as u32),
        }
    }
    let mut comps: Vec<Vec<u32>> = groups.into_values().collect();
    comps.sort_unstable_by_key(|g| g[0]);
    for g in comps {
        let mut local_row: HashMap<u32, u32> = HashMap::new();
        let mut rows: Vec<SpVec> = Vec::new();
        for (l, &j) in g.iter().enumerate() {
            for &(r, a) in &cols[j as usize] {
                let k = *local_row.entry(r).or_insert_with(|| {
                    rows.push(Vec::new());
                    rows.len() as u32 - 1
                });
                rows[k as usize].push((l as u32, a));
            }
        }
        let rr = Rref::of_rows(field, g.len(), &rows);
        for v in rr.null_space(field) {
            out.push(v.into_iter().map(|(l, a)| (g[l as usize], a)).collect());
        }
    }
    out.sort_by(|a, b| a.last().map(|t| t.0).cmp(&b.last().map(|t| t.0)));
    out
}

/// Some `x` with `m x = b`, or `None` when inconsistent.
pub fn solve(m: &FFMatrix, b: &SpVec) -> Option<SpVec> {
    let f = m.field();
    let n = m.ncols() as u32;
    let mut rows = m.rows_sparse();
    for &(i, a) in b {
        rows[i as usize].push((n, a));
    }
    let rr = Rref::of_rows(f, m.ncols() + 1, &rows);
    if rr.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = Vec::new();
    for (row, &p) in rr.rows.iter().zip(&rr.pivots) {
        if let Some(&(j, a)) = row.last() {
            if j == n {
                x.push((p, a));
            }
        }
    }
    Some(x)
}

pub fn inverse(m: &FFMatrix) -> Result<FFMatrix> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let f = m.field();
    let mut rows = m.rows_sparse();
    for (i, r) in rows.iter_mut().enumerate() {
        r.push(((n + i) as u32, Elem::ONE));
    }
    let rr = Rref::of_rows(f, 2 * n, &rows);
    if rr.rank() < n || rr.pivots.iter().any(|&p| p as usize >= n) {
        return Err(Error::Singular);
    }
    let trip = rr
        .rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().filter(|t| t.0 as usize >= n).map(move |&(j, a)| (i, j as usize - n, a)));
    FFMatrix::from_triplets(f, m.col_basis().clone(), m.row_basis().clone(), trip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::{Basis, Field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: &FieldRef, rng: &mut ChaCha8Rng, r: usize, c: usize, density: f64) -> FFMatrix {
        let mut trip = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if rng.gen_bool(density) {
                    trip.push((i, j, Elem(rng.gen_range(0..f.q()))));
                }
            }
        }
        FFMatrix::from_triplets(f, Basis::indexed(r), Basis::indexed(c), trip).unwrap()
    }

    // Oracle: plain dense Gauss-Jordan on Vec<Vec<Elem>>.
    fn dense_rank(f: &FieldRef, m: &FFMatrix) -> usize {
        let mut a = m.to_dense_rows();
        let (r, c) = (m.nrows(), m.ncols());
        let mut rank = 0;
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(rank, p);
            let inv = f.inv(a[rank][col]).unwrap();
            for j in 0..c {
                a[rank][j] = f.mul(a[rank][j], inv);
            }
            for i in 0..r {
                if i != rank && !a[i][col].is_zero() {
                    let t = a[i][col];
                    for j in 0..c {
                        a[i][j] = f.sub(a[i][j], f.mul(t, a[rank][j]));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_and_kernel_match_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(2, 1), (3, 1), (2, 3), (5, 2)] {
            let f = Field::new(p, e).unwrap();
            for _ in 0..40 {
                let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
                let m = random_matrix(&f, &mut rng, r, c, 0.4);
                let rk = dense_rank(&f, &m);
                assert_eq!(m.rank(), rk);
                let ker = m.kernel();
                assert_eq!(ker.len(), c - rk);
                for v in &ker {
                    assert!(m.apply(v).is_empty());
                }
                let cols: Vec<SpVec> = m.columns();
                let k2 = kernel_of_columns(&f, r, &cols);
                assert_eq!(k2.len(), ker.len());
                for v in &k2 {
                    assert!(m.apply(v).is_empty());
                }
            }
        }
    }

    #[test]
    fn solve_and_inverse() {
        let f = Field::prime(7).unwrap();
        let m = FFMatrix::from_int_rows(&f, &[vec![2, 1], vec![1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FFMatrix::identity(&f, Basis::indexed(2)));
        let x = solve(&m, &vec![(0, Elem(3))]).unwrap();
        assert_eq!(m.apply(&x), vec![(0, Elem(3))]);
        let sing = FFMatrix::from_int_rows(&f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::Singular)));
        assert!(solve(&sing, &vec![(0, Elem(1))]).is_none());
    }

    #[test]
    fn rref_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::new(3, 2).unwrap();
        let m = random_matrix(&f, &mut rng, 6, 7, 0.5);
        let mut rows = m.rows_sparse();
        let a = Rref::of_rows(&f, 7, &rows);
        rows.reverse();
        let b = Rref::of_rows(&f, 7, &rows);
        assert_eq!(a.pivots, b.pivots);
        assert_eq!(a.rows, b.rows);
    }
}
