use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffalg::codec::{matrix_from_bytes, matrix_to_bytes};
use crate::ffalg::linalg::kernel_of_columns;
use crate::ffalg::{normalize, Basis, Elem, FFMatrix, FieldRef, Rref, SpVec};
use crate::functor::combin::{monomials, Multiset};
use crate::functor::{gl_eval_with_inverse, BifunctorExpr};
use crate::troesch::TKey;

/// Byte store for computed invariant bases, keyed by a structural string.
pub trait BlobStore: Send + Sync {
    fn get(&self, key: &str) -> Option<Vec<u8>>;
    fn put(&self, key: &str, bytes: &[u8]);
}

/// Smallest admissible `q - 1` bound: generator fixed points are rational
/// invariants once `q - 1 > 4 D`.
pub fn check_q(field: &FieldRef, degree: usize) -> Result<()> {
    let needed = 4 * degree as u64 + 1;
    if (field.q() as u64) <= needed {
        return Err(Error::FieldTooSmall { needed, got: field.q() });
    }
    Ok(())
}

/// Smallest `q = p^e` with `q - 1 > 4 D`.
pub fn minimal_q(p: u32, degree: usize) -> u32 {
    let mut q = p;
    while (q as u64) <= 4 * degree as u64 + 1 {
        q *= p;
    }
    q
}

/// Root elements `e_ij(t)`, `t ≠ 0`, and `diag(t, 1, ..., 1)`, `t ≠ 0, 1`,
/// with their inverses.
pub fn generator_family(n: usize, field: &FieldRef) -> Vec<(FFMatrix, FFMatrix)> {
    let basis = Basis::indexed(n);
    let id = |extra: &[(usize, usize, Elem)]| {
        let mut trip: Vec<(usize, usize, Elem)> = (0..n).map(|i| (i, i, field.one())).collect();
        for &(i, j, a) in extra {
            if i == j {
                trip[i].2 = a;
            } else {
                trip.push((i, j, a));
            }
        }
        FFMatrix::from_triplets(field, basis.clone(), basis.clone(), trip).expect("square")
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for t in field.nonzero() {
                    out.push((id(&[(i, j, t)]), id(&[(i, j, field.neg(t))])));
                }
            }
        }
    }
    for t in field.nonzero().filter(|&t| t != field.one()) {
        out.push((id(&[(0, 0, t)]), id(&[(0, 0, field.inv(t).expect("nonzero"))])));
    }
    out
}

/// Invariants of `B(k^n, k^n)` through dense action matrices of the whole
/// generator family. Rows of the result span the invariants.
pub fn invariants(b: &BifunctorExpr, n: usize, field: &FieldRef) -> Result<Rref> {
    check_q(field, b.inner.degree(field.p())?)?;
    let dim = b.space(n).len();
    let mats = generator_family(n, field)
        .par_iter()
        .map(|(g, gi)| gl_eval_with_inverse(b, g, gi))
        .collect::<Result<Vec<_>>>()?;
    let id = FFMatrix::identity(field, b.space(n));
    let mut rows = Vec::new();
    for m in mats {
        rows.extend(m.sub(&id)?.rows_sparse());
    }
    let kernel = Rref::of_rows(field, dim, &rows).null_space(field);
    Ok(Rref::of_rows(field, dim, &kernel))
}

/// Invariants of one canonical block `S^{a_1}(gl) ⊗ ... ⊗ S^{a_r}(gl)`,
/// as reduced rows over its weight-zero monomials.
#[derive(Clone, Debug)]
pub struct BlockInvariants {
    pub sizes: Vec<usize>,
    pub keys: Vec<Vec<Multiset>>,
    pub basis: Vec<SpVec>,
}

type Subst<'a> = &'a (dyn Fn(u32) -> Vec<(u32, Elem)> + Sync);

fn expand_part(field: &FieldRef, part: &[u32], subst: Subst) -> Vec<(Multiset, Elem)> {
    let mut cur: HashMap<Multiset, Elem> = HashMap::from([(Vec::new(), field.one())]);
    for &v in part {
        let img = subst(v);
        let mut next: HashMap<Multiset, Elem> = HashMap::with_capacity(cur.len() * img.len());
        for (m, c) in &cur {
            for &(w, a) in &img {
                let mut m2 = m.clone();
                let pos = m2.partition_point(|&x| x <= w);
                m2.insert(pos, w);
                let e = next.entry(m2).or_insert(Elem::ZERO);
                *e = field.mul_add(*e, *c, a);
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur.into_iter().collect()
}

/// Image of a monomial key under a substitution of `gl` coordinates.
pub(crate) fn act_key(field: &FieldRef, key: &[Multiset], subst: Subst) -> HashMap<Vec<Multiset>, Elem> {
    let mut acc: Vec<(Vec<Multiset>, Elem)> = vec![(Vec::new(), field.one())];
    for part in key {
        let img = expand_part(field, part, subst);
        let mut next = Vec::with_capacity(acc.len() * img.len());
        for (k, c) in &acc {
            for (m, a) in &img {
                let mut k2 = k.clone();
                k2.push(m.clone());
                next.push((k2, field.mul(*c, *a)));
            }
        }
        acc = next;
    }
    let mut out: HashMap<Vec<Multiset>, Elem> = HashMap::with_capacity(acc.len());
    for (k, c) in acc {
        let e = out.entry(k).or_insert(Elem::ZERO);
        *e = field.add(*e, c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Conjugation by `e_ij(t)` on the coordinate `E_ab`, index `a*n + b`.
pub(crate) fn root_subst(field: &FieldRef, n: usize, i: usize, j: usize, t: Elem) -> impl Fn(u32) -> Vec<(u32, Elem)> + Sync {
    let f = field.clone();
    move |v| {
        let (a, b) = (v as usize / n, v as usize % n);
        let mut out = vec![(v, f.one())];
        if a == j {
            out.push(((i * n + b) as u32, t));
        }
        if b == i {
            out.push(((a * n + j) as u32, f.neg(t)));
        }
        if a == j && b == i {
            out.push(((i * n + j) as u32, f.neg(f.mul(t, t))));
        }
        out
    }
}

fn torus_subst(field: &FieldRef, n: usize, t: Elem) -> impl Fn(u32) -> Vec<(u32, Elem)> + Sync {
    let f = field.clone();
    let ti = f.inv(t).expect("nonzero");
    move |v| {
        let (a, b) = (v as usize / n, v as usize % n);
        let c = match (a == 0, b == 0) {
            (true, false) => t,
            (false, true) => ti,
            _ => f.one(),
        };
        vec![(v, c)]
    }
}

fn weight_zero_keys(sizes: &[usize], n: usize) -> Vec<Vec<Multiset>> {
    fn rec(sizes: &[usize], n: usize, bal: &mut Vec<i64>, cur: &mut Vec<Multiset>, out: &mut Vec<Vec<Multiset>>) {
        let remaining: usize = sizes[cur.len()..].iter().sum();
        let excess: i64 = bal.iter().filter(|&&x| x > 0).sum();
        if excess > remaining as i64 {
            return;
        }
        if cur.len() == sizes.len() {
            if bal.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        for m in monomials(n * n, sizes[cur.len()]).iter() {
            for &v in m {
                bal[v as usize / n] += 1;
                bal[v as usize % n] -= 1;
            }
            cur.push(m.clone());
            rec(sizes, n, bal, cur, out);
            cur.pop();
            for &v in m {
                bal[v as usize / n] -= 1;
                bal[v as usize % n] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(sizes, n, &mut vec![0; n], &mut Vec::new(), &mut out);
    out
}

fn compute_block(sizes: &[usize], n: usize, field: &FieldRef) -> Result<BlockInvariants> {
    let keys = weight_zero_keys(sizes, n);
    let mut basis: Vec<SpVec> = (0..keys.len() as u32).map(|c| vec![(c, field.one())]).collect();
    // simple root elements at t = 1 cut the weight-zero space down quickly
    let gens: Vec<(usize, usize)> = (0..n.saturating_sub(1)).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect();
    for (i, j) in gens {
        if basis.is_empty() {
            break;
        }
        let subst = root_subst(field, n, i, j, field.one());
        let images: Vec<HashMap<Vec<Multiset>, Elem>> = keys.par_iter().map(|k| act_key(field, k, &subst)).collect();
        let mut row_of: HashMap<&Vec<Multiset>, u32> = HashMap::new();
        let img: Vec<SpVec> = images
            .iter()
            .enumerate()
            .map(|(c, im)| {
                let mut v: SpVec = Vec::with_capacity(im.len());
                for (k, &a) in im {
                    let a = if *k == keys[c] { field.sub(a, field.one()) } else { a };
                    let next = row_of.len() as u32;
                    v.push((*row_of.entry(k).or_insert(next), a));
                }
                normalize(field, v)
            })
            .collect();
        let cols: Vec<SpVec> = basis
            .iter()
            .map(|v| normalize(field, v.iter().flat_map(|&(c, a)| img[c as usize].iter().map(move |&(r, b)| (r, field.mul(a, b)))).collect()))
            .collect();
        let combos = kernel_of_columns(field, row_of.len(), &cols);
        basis = combos
            .iter()
            .map(|cmb| normalize(field, cmb.iter().flat_map(|&(l, a)| basis[l as usize].iter().map(move |&(c, b)| (c, field.mul(a, b)))).collect()))
            .collect();
    }
    let rref = Rref::of_rows(field, keys.len(), &basis);
    verify_block(sizes, n, field, &keys, &rref.rows)?;
    Ok(BlockInvariants { sizes: sizes.to_vec(), keys, basis: rref.rows })
}

/// Checks every vector against the full generator family over `F_q`.
fn verify_block(sizes: &[usize], n: usize, field: &FieldRef, keys: &[Vec<Multiset>], basis: &[SpVec]) -> Result<()> {
    if basis.is_empty() {
        return Ok(());
    }
    let mut family: Vec<(usize, usize, Elem, bool)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                family.extend(field.nonzero().map(|t| (i, j, t, false)));
            }
        }
    }
    family.extend(field.nonzero().filter(|&t| t != field.one()).map(|t| (0, 0, t, true)));
    let support: BTreeSet<u32> = basis.iter().flatten().map(|t| t.0).collect();
    let bad = family.par_iter().find_any(|&&(i, j, t, torus)| {
        let subst: Box<dyn Fn(u32) -> Vec<(u32, Elem)> + Sync> =
            if torus { Box::new(torus_subst(field, n, t)) } else { Box::new(root_subst(field, n, i, j, t)) };
        let images: HashMap<u32, HashMap<Vec<Multiset>, Elem>> =
            support.iter().map(|&c| (c, act_key(field, &keys[c as usize], &*subst))).collect();
        basis.iter().any(|v| {
            let mut acc: HashMap<&Vec<Multiset>, Elem> = HashMap::new();
            for &(c, a) in v {
                for (k, &b) in &images[&c] {
                    let e = acc.entry(k).or_insert(Elem::ZERO);
                    *e = field.mul_add(*e, a, b);
                }
                let e = acc.entry(&keys[c as usize]).or_insert(Elem::ZERO);
                *e = field.sub(*e, a);
            }
            acc.values().any(|x| !x.is_zero())
        })
    });
    match bad {
        Some(&(i, j, _, torus)) => Err(Error::Verification(format!(
            "block {sizes:?} at n = {n}: vector not fixed by {}",
            if torus { "a torus element".to_string() } else { format!("e_{i}{j}(t)") }
        ))),
        None => Ok(()),
    }
}

/// Keyed invariants engine for sums of tensor products of symmetric powers
/// of `gl_n^{⊕p}`, with per-block memoization and an optional byte store.
pub struct Invariants {
    n: usize,
    field: FieldRef,
    memo: Mutex<HashMap<Vec<usize>, Arc<BlockInvariants>>>,
    store: Option<Arc<dyn BlobStore>>,
    pub computed: AtomicUsize,
    pub loaded: AtomicUsize,
}

impl Invariants {
    pub fn new(n: usize, field: &FieldRef) -> Self {
        Invariants {
            n,
            field: field.clone(),
            memo: Mutex::new(HashMap::new()),
            store: None,
            computed: AtomicUsize::new(0),
            loaded: AtomicUsize::new(0),
        }
    }

    pub fn with_store(mut self, store: Arc<dyn BlobStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn store_key(&self, sizes: &[usize]) -> String {
        format!("invariants/v1/sizes={sizes:?}/n={}/q={}^{}", self.n, self.field.p(), self.field.e())
    }

    fn load(&self, sizes: &[usize]) -> Option<BlockInvariants> {
        let bytes = self.store.as_ref()?.get(&self.store_key(sizes))?;
        let m = matrix_from_bytes(&bytes).ok()?;
        let keys = weight_zero_keys(sizes, self.n);
        if m.field() != &self.field || m.nrows() != keys.len() {
            return None;
        }
        Some(BlockInvariants { sizes: sizes.to_vec(), keys, basis: m.columns() })
    }

    pub fn block(&self, sizes: &[usize]) -> Result<Arc<BlockInvariants>> {
        if let Some(b) = self.memo.lock().unwrap().get(sizes) {
            return Ok(b.clone());
        }
        check_q(&self.field, sizes.iter().sum())?;
        let b = match self.load(sizes) {
            Some(b) => {
                self.loaded.fetch_add(1, Ordering::Relaxed);
                b
            }
            None => {
                let b = compute_block(sizes, self.n, &self.field)?;
                self.computed.fetch_add(1, Ordering::Relaxed);
                if let Some(s) = &self.store {
                    let m = FFMatrix::from_columns(&self.field, Basis::indexed(b.keys.len()), Basis::indexed(b.basis.len()), b.basis.clone())?;
                    s.put(&self.store_key(sizes), &matrix_to_bytes(&m));
                }
                b
            }
        };
        let b = Arc::new(b);
        self.memo.lock().unwrap().insert(sizes.to_vec(), b.clone());
        Ok(b)
    }

    /// Invariant subspace of the span of `keys`, whose variables are
    /// `slot * n² + a * n + b`.
    pub fn of_keys(&self, keys: &[TKey]) -> Result<Rref> {
        let nn = (self.n * self.n) as u32;
        let index: HashMap<&TKey, u32> = keys.iter().enumerate().map(|(i, k)| (k, i as u32)).collect();
        let signature = |k: &TKey| -> (u32, Vec<Vec<(u32, usize)>>) {
            let parts = k
                .parts
                .iter()
                .map(|m| {
                    let mut c: Vec<(u32, usize)> = Vec::new();
                    for &w in m {
                        match c.last_mut() {
                            Some(last) if last.0 == w / nn => last.1 += 1,
                            _ => c.push((w / nn, 1)),
                        }
                    }
                    c
                })
                .collect();
            (k.block, parts)
        };
        let sigs: BTreeSet<(u32, Vec<Vec<(u32, usize)>>)> = keys.iter().map(signature).collect();
        let sigs: Vec<_> = sigs.into_iter().collect();
        let rows = sigs
            .par_iter()
            .map(|(block, parts)| -> Result<Vec<SpVec>> {
                let sizes: Vec<usize> = parts.iter().flatten().map(|t| t.1).collect();
                let blk = self.block(&sizes)?;
                blk.basis
                    .iter()
                    .map(|v| {
                        let mut out = Vec::with_capacity(v.len());
                        for &(c, a) in v {
                            let canon = &blk.keys[c as usize];
                            let mut pos = 0;
                            let actual: Vec<Multiset> = parts
                                .iter()
                                .map(|slots| {
                                    let mut m: Multiset = Vec::new();
                                    for &(s, _) in slots {
                                        m.extend(canon[pos].iter().map(|&v| s * nn + v));
                                        pos += 1;
                                    }
                                    m
                                })
                                .collect();
                            let key = TKey::new(*block, actual);
                            let i = index
                                .get(&key)
                                .ok_or_else(|| Error::Verification(format!("invariant key {key} outside the space")))?;
                            out.push((*i, a));
                        }
                        out.sort_unstable_by_key(|t| t.0);
                        Ok(out)
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Rref::of_rows(&self.field, keys.len(), &rows.concat()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;
    use crate::functor::FunctorExpr;

    #[test]
    fn dense_examples() {
        let f = Field::of_order(16).unwrap();
        assert_eq!(invariants(&BifunctorExpr::gl(), 2, &f).unwrap().rank(), 1);
        let gl2 = BifunctorExpr::new(FunctorExpr::tensor_power(2));
        assert_eq!(invariants(&gl2, 2, &f).unwrap().rank(), 2);
        let tw = BifunctorExpr::new(FunctorExpr::compose(FunctorExpr::Gamma(1), FunctorExpr::Twist(1)));
        assert_eq!(invariants(&tw, 2, &f).unwrap().rank(), 1);
    }

    #[test]
    fn refuses_small_field() {
        let f = Field::of_order(8).unwrap();
        let gl2 = BifunctorExpr::new(FunctorExpr::tensor_power(2));
        assert!(matches!(invariants(&gl2, 2, &f), Err(Error::FieldTooSmall { needed: 9, got: 8 })));
        assert_eq!(minimal_q(2, 2), 16);
        assert_eq!(minimal_q(3, 6), 27);
    }

    #[test]
    fn keyed_matches_dense() {
        for (q, sizes, n) in [(16u32, vec![1, 1], 2usize), (16, vec![2], 2), (27, vec![1, 2], 2), (32, vec![1, 1], 3)] {
            let f = Field::of_order(q).unwrap();
            let inv = Invariants::new(n, &f);
            let blk = inv.block(&sizes).unwrap();
            let b = BifunctorExpr::new(FunctorExpr::sym_tensor(&sizes));
            assert_eq!(blk.basis.len(), invariants(&b, n, &f).unwrap().rank(), "{sizes:?} n={n}");
        }
    }

    #[test]
    fn gl_tensor_four_has_permutation_count() {
        // dim (gl^{⊗4})^{GL_n} = 4! once n ≥ 4
        let f = Field::of_order(32).unwrap();
        let inv = Invariants::new(4, &f);
        assert_eq!(inv.block(&[1, 1, 1, 1]).unwrap().basis.len(), 24);
    }
}
