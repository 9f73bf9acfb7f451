use super::basis::Basis;
use super::field::FieldRef;
use super::linalg::{Echelon, Rref};
use super::matrix::{FFMatrix, SpVec};
use crate::error::{Error, Result};

/// A finite cochain complex `C^0 -> C^1 -> ...` with chosen bases.
/// Degrees past the last object are zero.
#[derive(Clone, Debug)]
pub struct BasedComplex {
    field: FieldRef,
    objects: Vec<Basis>,
    diffs: Vec<FFMatrix>,
}

#[derive(Clone, Debug)]
pub struct Homology {
    pub dim: usize,
    /// Cycle representatives, in ambient coordinates of the degree.
    pub reps: Vec<SpVec>,
}

impl BasedComplex {
    /// `diffs[k]` maps degree k to k+1; there are `objects.len() - 1` of them.
    pub fn new(field: &FieldRef, objects: Vec<Basis>, diffs: Vec<FFMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(field, objects, diffs)?;
        for k in 0..c.diffs.len().saturating_sub(1) {
            if !c.diffs[k + 1].mul(&c.diffs[k])?.is_zero() {
                return Err(Error::NotComplex(k));
            }
        }
        Ok(c)
    }

    pub(crate) fn new_unchecked(field: &FieldRef, objects: Vec<Basis>, diffs: Vec<FFMatrix>) -> Result<Self> {
        if diffs.len() + 1 != objects.len().max(1) {
            return Err(Error::Dimension(format!("{} objects need {} differentials", objects.len(), objects.len().saturating_sub(1))));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.ncols() != objects[k].len() || d.nrows() != objects[k + 1].len() {
                return Err(Error::Dimension(format!("differential in degree {k} has wrong shape")));
            }
        }
        Ok(BasedComplex { field: field.clone(), objects, diffs })
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

    pub fn dims(&self) -> Vec<usize> {
        self.objects.iter().map(|b| b.len()).collect()
    }

    pub fn object(&self, k: usize) -> Basis {
        self.objects.get(k).cloned().unwrap_or_else(|| Basis::indexed(0))
    }

    pub fn dim(&self, k: usize) -> usize {
        self.objects.get(k).map_or(0, |b| b.len())
    }

    /// Differential out of degree `k`, zero past the end.
    pub fn d(&self, k: usize) -> FFMatrix {
        self.diffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| FFMatrix::zeros(&self.field, self.object(k + 1), self.object(k)))
    }

    pub fn diffs(&self) -> &[FFMatrix] {
        &self.diffs
    }

    /// Cohomology in degree `k`, with representatives chosen by extending an
    /// echelon basis of the boundaries through the kernel basis in order.
    pub fn homology(&self, k: usize) -> Homology {
        let n = self.dim(k);
        let cycles: Vec<SpVec> = match self.diffs.get(k) {
            Some(d) => d.kernel(),
            None => (0..n as u32).map(|i| vec![(i, self.field.one())]).collect(),
        };
        let mut e = Echelon::new(&self.field, n);
        if k > 0 {
            if let Some(prev) = self.diffs.get(k - 1) {
                for c in 0..prev.ncols() {
                    e.insert(&prev.column(c));
                }
            }
        }
        let mut reps = Vec::new();
        for z in cycles {
            let r = e.reduce(&z);
            if !r.is_empty() {
                e.insert_reduced(r);
                reps.push(z);
            }
        }
        Homology { dim: reps.len(), reps }
    }

    /// Cohomology dimension only: `dim ker d^k - rank d^{k-1}`.
    pub fn homology_dim(&self, k: usize) -> usize {
        let n = self.dim(k);
        let out = self.diffs.get(k).map_or(0, |d| d.rank());
        let inc = if k > 0 { self.diffs.get(k - 1).map_or(0, |d| d.rank()) } else { 0 };
        n - out - inc
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.diffs.iter().map(|d| d.rank()).collect();
        (0..self.len())
            .map(|k| self.dim(k) - ranks.get(k).copied().unwrap_or(0) - if k > 0 { ranks[k - 1] } else { 0 })
            .collect()
    }

    /// Homology dimensions computed block by block, for complexes whose
    /// differentials respect a labelling of basis vectors by blocks.
    /// Fails if some differential mixes blocks.
    pub fn homology_dims_blocked<K: Ord + Clone>(&self, block_of: impl Fn(usize, usize) -> K) -> Result<Vec<usize>> {
        use std::collections::BTreeMap;
        let mut index: Vec<BTreeMap<K, Vec<u32>>> = Vec::new();
        let mut local: Vec<Vec<u32>> = Vec::new();
        for k in 0..self.len() {
            let mut m: BTreeMap<K, Vec<u32>> = BTreeMap::new();
            let mut loc = vec![0u32; self.dim(k)];
            for i in 0..self.dim(k) {
                let v = m.entry(block_of(k, i)).or_default();
                loc[i] = v.len() as u32;
                v.push(i as u32);
            }
            index.push(m);
            local.push(loc);
        }
        let mut ranks = vec![0usize; self.diffs.len()];
        for (k, d) in self.diffs.iter().enumerate() {
            for (key, members) in &index[k] {
                let target_len = index[k + 1].get(key).map_or(0, |v| v.len());
                let mut e = Echelon::new(&self.field, target_len);
                for &c in members {
                    let mut col = Vec::new();
                    let mut bad = false;
                    d.for_each_in_column(c as usize, |i, a| {
                        if block_of(k + 1, i as usize) != *key {
                            bad = true;
                        }
                        col.push((local[k + 1][i as usize], a));
                    });
                    if bad {
                        return Err(Error::Verification(format!("differential in degree {k} mixes blocks")));
                    }
                    col.sort_unstable_by_key(|t| t.0);
                    e.insert(&col);
                }
                ranks[k] += e.rank();
            }
        }
        Ok((0..self.len())
            .map(|k| self.dim(k) - ranks.get(k).copied().unwrap_or(0) - if k > 0 { ranks[k - 1] } else { 0 })
            .collect())
    }

    /// Subcomplex spanned, degreewise, by the rows of the given reduced
    /// echelon bases. Returns the induced differentials in those coordinates;
    /// fails if some differential leaves the subspaces.
    pub fn restrict(&self, subspaces: &[Rref]) -> Result<BasedComplex> {
        let objects: Vec<Basis> = subspaces.iter().map(|s| Basis::indexed(s.rank())).collect();
        let mut diffs = Vec::new();
        for k in 0..subspaces.len().saturating_sub(1) {
            let d = self.d(k);
            let target = &subspaces[k + 1];
            let mut e = Echelon::new(&self.field, target.ncols);
            for r in &target.rows {
                e.insert(r);
            }
            let mut cols = Vec::new();
            for v in &subspaces[k].rows {
                let img = d.apply(v);
                if !e.reduce(&img).is_empty() {
                    return Err(Error::Verification(format!("differential in degree {k} leaves the subspace")));
                }
                cols.push(target.coordinates(&img));
            }
            diffs.push(FFMatrix::from_columns(&self.field, objects[k + 1].clone(), objects[k].clone(), cols)?);
        }
        BasedComplex::new_unchecked(&self.field, objects, diffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn koszul_like_complex_homology() {
        // k -> k^2 -> k, (1,1) then (1,-1): exact in the middle over F_3
        let f = Field::prime(3).unwrap();
        let d0 = FFMatrix::from_int_rows(&f, &[vec![1], vec![1]]).unwrap();
        let d1 = FFMatrix::from_int_rows(&f, &[vec![1, -1]]).unwrap();
        let c = BasedComplex::new(&f, vec![Basis::indexed(1), Basis::indexed(2), Basis::indexed(1)], vec![d0, d1]).unwrap();
        assert_eq!(c.homology_dims(), vec![0, 0, 0]);
        assert_eq!(c.homology(1).dim, 0);
    }

    #[test]
    fn non_complex_rejected() {
        let f = Field::prime(2).unwrap();
        let d0 = FFMatrix::from_int_rows(&f, &[vec![1]]).unwrap();
        let r = BasedComplex::new(&f, vec![Basis::indexed(1); 3], vec![d0.clone(), d0]);
        assert!(matches!(r, Err(Error::NotComplex(0))));
    }

    #[test]
    fn representatives_avoid_boundaries() {
        let f = Field::prime(2).unwrap();
        let d0 = FFMatrix::from_int_rows(&f, &[vec![1], vec![0]]).unwrap();
        let c = BasedComplex::new(&f, vec![Basis::indexed(1), Basis::indexed(2)], vec![d0]).unwrap();
        let h = c.homology(1);
        assert_eq!(h.dim, 1);
        assert_eq!(h.reps[0], vec![(1, f.one())]);
        assert_eq!(c.homology_dims_blocked(|_, i| i).unwrap(), vec![0, 1]);
    }
}
