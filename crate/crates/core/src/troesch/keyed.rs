use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{Basis, FFMatrix, FieldRef};
use crate::functor::combin::Multiset;
use crate::pcomplex::{tensor_layout, tensor_p, NComplex};

/// Basis key of an evaluated sum of symmetric tensors over `W = V^{⊕p}`:
/// the summand and one multiset of `W`-variables per tensor factor.
/// Variable `slot * m + v` is `x_v` in the `slot`-th copy of `V = k^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TKey {
    pub block: u32,
    pub parts: Vec<Multiset>,
}

impl TKey {
    pub fn new(block: u32, parts: Vec<Multiset>) -> Self {
        TKey { block, parts }
    }

    /// Cohomological degree `Σ slot` for variables over `k^m`.
    pub fn degree(&self, m: usize) -> usize {
        self.parts.iter().flatten().map(|&w| w as usize / m).sum()
    }

    /// The key with slots forgotten; preserved by the Troesch differential.
    pub fn content(&self, m: usize) -> (u32, Vec<Multiset>) {
        let parts = self
            .parts
            .iter()
            .map(|x| {
                let mut v: Multiset = x.iter().map(|&w| w % m as u32).collect();
                v.sort_unstable();
                v
            })
            .collect();
        (self.block, parts)
    }
}

impl fmt::Display for TKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.block)?;
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|m| m.iter().map(|w| format!("w{w}")).collect::<Vec<_>>().join("·"))
            .collect();
        write!(f, "{}", s.join("⊗"))
    }
}

/// An evaluated p-complex whose basis vectors carry [`TKey`]s.
#[derive(Clone, Debug)]
pub struct KeyedNComplex {
    pub complex: NComplex,
    pub keys: Vec<Vec<TKey>>,
    /// Dimension `m` of `V`.
    pub dim: usize,
    pub blocks: u32,
}

impl KeyedNComplex {
    pub fn new(complex: NComplex, keys: Vec<Vec<TKey>>, dim: usize, blocks: u32) -> Result<Self> {
        if keys.len() != complex.len() || keys.iter().zip(complex.dims()).any(|(k, d)| k.len() != d) {
            return Err(Error::Dimension("keys do not match the complex".into()));
        }
        Ok(KeyedNComplex { complex, keys, dim, blocks })
    }

    /// The unit `k` in degree 0.
    pub fn unit(field: &FieldRef, p: usize, dim: usize) -> Result<Self> {
        let c = NComplex::new(field, p, vec![Basis::indexed(1)], Vec::new())?;
        Ok(KeyedNComplex { complex: c, keys: vec![vec![TKey::new(0, Vec::new())]], dim, blocks: 1 })
    }

    pub fn index(&self, t: usize) -> HashMap<&TKey, usize> {
        self.keys.get(t).map_or_else(HashMap::new, |ks| ks.iter().enumerate().map(|(i, k)| (k, i)).collect())
    }

    pub fn tensor_p(&self, other: &KeyedNComplex) -> Result<KeyedNComplex> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("tensor of complexes over k^{} and k^{}", self.dim, other.dim)));
        }
        let complex = tensor_p(&self.complex, &other.complex)?;
        let (xd, yd) = (self.complex.dims(), other.complex.dims());
        let keys = (0..complex.len())
            .map(|t| {
                let mut out = Vec::with_capacity(complex.dim(t));
                for s in tensor_layout(&xd, &yd, t) {
                    for u in &self.keys[s.a] {
                        for v in &other.keys[s.b] {
                            out.push(TKey::new(
                                u.block * other.blocks + v.block,
                                [u.parts.clone(), v.parts.clone()].concat(),
                            ));
                        }
                    }
                }
                out
            })
            .collect();
        KeyedNComplex::new(complex, keys, self.dim, self.blocks * other.blocks)
    }

    pub fn direct_sum(field: &FieldRef, p: usize, parts: &[KeyedNComplex]) -> Result<KeyedNComplex> {
        let dim = parts.first().map_or(0, |c| c.dim);
        let complexes: Vec<NComplex> = parts.iter().map(|c| c.complex.clone()).collect();
        let complex = NComplex::direct_sum(field, p, &complexes)?;
        let mut keys = vec![Vec::new(); complex.len()];
        let mut off = 0;
        for c in parts {
            for (t, ks) in c.keys.iter().enumerate() {
                keys[t].extend(ks.iter().map(|k| TKey::new(k.block + off, k.parts.clone())));
            }
            off += c.blocks;
        }
        KeyedNComplex::new(complex, keys, dim, off)
    }

    /// Content labels for blocked homology of the contraction `C_[s]`.
    pub fn contraction_content(&self, s: usize) -> Vec<Vec<(u32, Vec<Multiset>)>> {
        crate::pcomplex::contraction_degrees(self.complex.order(), s, self.complex.len())
            .into_iter()
            .map(|a| self.keys[a].iter().map(|k| k.content(self.dim)).collect())
            .collect()
    }

    /// Matrix of a key-level linear map from degree `t` of `self` to degree
    /// `t` of `target`.
    pub fn key_map(
        &self,
        target: &KeyedNComplex,
        t: usize,
        f: impl Fn(&TKey) -> Vec<(TKey, i64)>,
    ) -> Result<FFMatrix> {
        let field = self.complex.field();
        let idx = target.index(t);
        let mut cols = Vec::with_capacity(self.complex.dim(t));
        for k in self.keys.get(t).map_or(&[][..], |v| &v[..]) {
            let mut col = Vec::new();
            for (y, c) in f(k) {
                let i = idx
                    .get(&y)
                    .ok_or_else(|| Error::Verification(format!("image key {y} missing from target degree {t}")))?;
                col.push((*i as u32, field.from_int(c)));
            }
            cols.push(crate::ffalg::normalize(field, col));
        }
        FFMatrix::from_columns(field, target.complex.object(t), self.complex.object(t), cols)
    }
}

/// An ordinary complex whose basis vectors carry [`TKey`]s.
#[derive(Clone, Debug)]
pub struct KeyedComplex {
    pub complex: crate::ffalg::BasedComplex,
    pub keys: Vec<Vec<TKey>>,
    pub dim: usize,
}

impl KeyedNComplex {
    pub fn contract(&self, s: usize) -> Result<KeyedComplex> {
        let complex = crate::pcomplex::contract(&self.complex, s)?;
        let keys = crate::pcomplex::contraction_degrees(self.complex.order(), s, self.complex.len())
            .into_iter()
            .map(|a| self.keys[a].clone())
            .collect();
        Ok(KeyedComplex { complex, keys, dim: self.dim })
    }
}

impl KeyedComplex {
    pub fn index(&self, t: usize) -> HashMap<&TKey, usize> {
        self.keys.get(t).map_or_else(HashMap::new, |ks| ks.iter().enumerate().map(|(i, k)| (k, i)).collect())
    }

    /// Ordinary tensor product with keys concatenated, blocks multiplied.
    pub fn tensor_ord(&self, other: &KeyedComplex, other_blocks: u32) -> Result<KeyedComplex> {
        let complex = crate::pcomplex::tensor_ord(&self.complex, &other.complex)?;
        let (xd, yd) = (self.complex.dims(), other.complex.dims());
        let keys = (0..complex.len())
            .map(|t| {
                let mut out = Vec::with_capacity(complex.dim(t));
                for s in tensor_layout(&xd, &yd, t) {
                    for u in &self.keys[s.a] {
                        for v in &other.keys[s.b] {
                            out.push(TKey::new(u.block * other_blocks + v.block, [u.parts.clone(), v.parts.clone()].concat()));
                        }
                    }
                }
                out
            })
            .collect();
        Ok(KeyedComplex { complex, keys, dim: self.dim })
    }

    /// Coordinates of a key-supported vector in degree `t`.
    pub fn vector(&self, t: usize, terms: &[(TKey, crate::ffalg::Elem)]) -> Result<crate::ffalg::SpVec> {
        let idx = self.index(t);
        let mut v = Vec::with_capacity(terms.len());
        for (k, a) in terms {
            let i = idx.get(k).ok_or_else(|| Error::Verification(format!("key {k} missing from degree {t}")))?;
            v.push((*i as u32, *a));
        }
        Ok(crate::ffalg::normalize(self.complex.field(), v))
    }

    /// Homology dimensions computed block by block over key contents.
    pub fn homology_dims_by_content(&self) -> Result<Vec<usize>> {
        self.complex.homology_dims_blocked(|t, i| self.keys[t][i].content(self.dim))
    }
}
