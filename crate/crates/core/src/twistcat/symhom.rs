use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{normalize, FFMatrix, FieldRef, SpVec};
use crate::functor::combin::{monomial_index, monomials, Multiset};
use crate::functor::symtensor::{apply_hom_matrix, hom_matrices, HomMatrix, SymKey};
use crate::functor::{eval_space, FunctorExpr, NatMap};

/// Large prime used when composing over the integers: on squarefree keys
/// every structural coefficient is 1, so nothing is lost.
const WIDE: u32 = 2_147_483_647;

/// A direct sum of symmetric tensors `⊕_i S^{λ^i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymSum {
    pub parts: Vec<Vec<usize>>,
}

impl SymSum {
    pub fn new(parts: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(first) = parts.first() {
            let d: usize = first.iter().sum();
            if let Some(bad) = parts.iter().find(|l| l.iter().sum::<usize>() != d) {
                return Err(Error::Degree(format!("inhomogeneous sum: {first:?} and {bad:?}")));
            }
        }
        Ok(SymSum { parts })
    }

    pub fn single(lambda: Vec<usize>) -> Self {
        SymSum { parts: vec![lambda] }
    }

    /// `⊗^d` as a symmetric tensor.
    pub fn tensor_power(d: usize) -> Self {
        SymSum::single(vec![1; d])
    }

    pub fn degree(&self) -> usize {
        self.parts.first().map_or(0, |l| l.iter().sum())
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn scaled(&self, p: usize) -> SymSum {
        SymSum { parts: self.parts.iter().map(|l| l.iter().map(|x| x * p).collect()).collect() }
    }

    pub fn to_functor(&self) -> FunctorExpr {
        FunctorExpr::Sum(self.parts.iter().map(|l| FunctorExpr::sym_tensor(l)).collect())
    }

    pub fn dim(&self, n: usize) -> usize {
        self.parts.iter().map(|l| part_dim(l, n)).sum()
    }

    /// Start of each summand in the evaluated basis.
    pub fn offsets(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut acc = 0;
        out.push(0);
        for l in &self.parts {
            acc += part_dim(l, n);
            out.push(acc);
        }
        out
    }
}

impl fmt::Display for SymSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|l| l.iter().map(|x| format!("S{x}")).collect::<Vec<_>>().join("⊗"))
            .collect();
        if s.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", s.join(" ⊕ "))
        }
    }
}

fn part_dim(l: &[usize], n: usize) -> usize {
    l.iter().map(|&k| monomials(n, k).len()).product()
}

/// Position of a key inside the evaluated basis of `S^λ(k^n)`.
pub fn key_position(lambda: &[usize], n: usize, key: &[Multiset]) -> usize {
    lambda.iter().zip(key).fold(0, |acc, (&k, m)| {
        let r = monomials(n, k).len();
        acc * r + monomial_index(n, k)[m] as usize
    })
}

/// One term `coef · A` of a map from summand `src` to summand `tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomTerm {
    pub src: usize,
    pub tgt: usize,
    pub matrix: HomMatrix,
    pub coef: i64,
}

/// A natural map between sums of symmetric tensors, in the basis of
/// comultiply-then-multiply maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymHom {
    pub source: SymSum,
    pub target: SymSum,
    terms: Vec<HomTerm>,
}

impl SymHom {
    pub fn new(source: SymSum, target: SymSum, terms: Vec<HomTerm>) -> Result<Self> {
        for t in &terms {
            let (Some(l), Some(m)) = (source.parts.get(t.src), target.parts.get(t.tgt)) else {
                return Err(Error::Dimension(format!("term block ({}, {}) out of range", t.src, t.tgt)));
            };
            let rows: Vec<usize> = t.matrix.iter().map(|r| r.iter().sum()).collect();
            let cols: Vec<usize> = (0..m.len()).map(|j| t.matrix.iter().map(|r| r.get(j).copied().unwrap_or(0)).sum()).collect();
            if &rows != l || &cols != m || t.matrix.iter().any(|r| r.len() != m.len()) {
                return Err(Error::Degree(format!("matrix {:?} does not have margins {l:?}, {m:?}", t.matrix)));
            }
        }
        Ok(SymHom { source, target, terms }.normalized())
    }

    pub fn zero(source: SymSum, target: SymSum) -> Self {
        SymHom { source, target, terms: Vec::new() }
    }

    pub fn identity(s: &SymSum) -> Self {
        let terms = s
            .parts
            .iter()
            .enumerate()
            .map(|(i, l)| HomTerm { src: i, tgt: i, matrix: diag(l), coef: 1 })
            .collect();
        SymHom { source: s.clone(), target: s.clone(), terms }
    }

    /// `S^{a_1} ⊗ ... ⊗ S^{a_k} -> S^{Σa}`.
    pub fn multiply(a: &[usize]) -> Self {
        let total = a.iter().sum();
        let m = a.iter().map(|&x| vec![x]).collect();
        SymHom::single(a.to_vec(), vec![total], m, 1)
    }

    /// `S^{Σa} -> S^{a_1} ⊗ ... ⊗ S^{a_k}`.
    pub fn comultiply(a: &[usize]) -> Self {
        SymHom::single(vec![a.iter().sum()], a.to_vec(), vec![a.to_vec()], 1)
    }

    /// Factor permutation of `S^λ`: output factor `k` is input factor `sigma[k]`.
    pub fn permutation(lambda: &[usize], sigma: &[usize]) -> Self {
        let mu: Vec<usize> = sigma.iter().map(|&i| lambda[i]).collect();
        let mut m = vec![vec![0; mu.len()]; lambda.len()];
        for (k, &i) in sigma.iter().enumerate() {
            m[i][k] = lambda[i];
        }
        SymHom::single(lambda.to_vec(), mu, m, 1)
    }

    pub fn single(lambda: Vec<usize>, mu: Vec<usize>, matrix: HomMatrix, coef: i64) -> Self {
        SymHom {
            source: SymSum::single(lambda),
            target: SymSum::single(mu),
            terms: vec![HomTerm { src: 0, tgt: 0, matrix, coef }],
        }
        .normalized()
    }

    pub fn terms(&self) -> &[HomTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalized(mut self) -> Self {
        let mut acc: BTreeMap<(usize, usize, HomMatrix), i64> = BTreeMap::new();
        for t in self.terms.drain(..) {
            *acc.entry((t.src, t.tgt, t.matrix)).or_insert(0) += t.coef;
        }
        self.terms = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((src, tgt, matrix), coef)| HomTerm { src, tgt, matrix, coef })
            .collect();
        self
    }

    /// Coefficients reduced into `0..p`.
    pub fn reduced(&self, p: u32) -> SymHom {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coef = t.coef.rem_euclid(p as i64);
        }
        out.normalized()
    }

    fn check_same_shape(&self, other: &SymHom) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension(format!(
                "maps {} -> {} and {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(())
    }

    pub fn lin_comb(&self, a: i64, other: &SymHom, b: i64) -> Result<SymHom> {
        self.check_same_shape(other)?;
        let mut terms: Vec<HomTerm> = self.terms.iter().map(|t| HomTerm { coef: a * t.coef, ..t.clone() }).collect();
        terms.extend(other.terms.iter().map(|t| HomTerm { coef: b * t.coef, ..t.clone() }));
        Ok(SymHom { source: self.source.clone(), target: self.target.clone(), terms }.normalized())
    }

    pub fn add(&self, other: &SymHom) -> Result<SymHom> {
        self.lin_comb(1, other, 1)
    }

    pub fn scale(&self, a: i64) -> SymHom {
        SymHom { terms: self.terms.iter().map(|t| HomTerm { coef: a * t.coef, ..t.clone() }).collect(), ..self.clone() }
            .normalized()
    }

    /// Image of one basis key of summand `src`, coefficients modulo `p`.
    pub fn apply_key(&self, src: usize, key: &[Multiset], p: u32) -> Vec<((usize, SymKey), u32)> {
        let mut out: BTreeMap<(usize, SymKey), u64> = BTreeMap::new();
        for t in self.terms.iter().filter(|t| t.src == src) {
            let c = t.coef.rem_euclid(p as i64) as u64;
            if c == 0 {
                continue;
            }
            for (k, a) in apply_hom_matrix(&t.matrix, key, p) {
                let e = out.entry((t.tgt, k)).or_insert(0);
                *e = (*e + c * a as u64) % p as u64;
            }
        }
        out.into_iter().filter(|(_, c)| *c != 0).map(|(k, c)| (k, c as u32)).collect()
    }

    /// `self ∘ g`, exact over the integers.
    pub fn compose(&self, g: &SymHom) -> Result<SymHom> {
        if g.target != self.source {
            return Err(Error::Dimension(format!("cannot compose {} after {}", self.source, g.target)));
        }
        let mut terms = Vec::new();
        for (i, lambda) in g.source.parts.iter().enumerate() {
            let (u0, block_of) = multilinear_base(lambda);
            let mut image: BTreeMap<(usize, SymKey), i64> = BTreeMap::new();
            for t in g.terms.iter().filter(|t| t.src == i) {
                for (k, _) in apply_hom_matrix(&t.matrix, &u0, WIDE) {
                    for u in self.terms.iter().filter(|u| u.src == t.tgt) {
                        for (k2, _) in apply_hom_matrix(&u.matrix, &k, WIDE) {
                            *image.entry((u.tgt, k2)).or_insert(0) += t.coef * u.coef;
                        }
                    }
                }
            }
            terms.extend(decompose_multilinear(i, &block_of, lambda.len(), &image));
        }
        Ok(SymHom { source: g.source.clone(), target: self.target.clone(), terms }.normalized())
    }

    /// Matrix of the map on `k^n`, from `eval_space(source, n)` to `eval_space(target, n)`.
    pub fn eval(&self, field: &FieldRef, n: usize) -> Result<FFMatrix> {
        let p = field.p();
        let toff = self.target.offsets(n);
        let mut cols: Vec<SpVec> = Vec::with_capacity(self.source.dim(n));
        for (i, lambda) in self.source.parts.iter().enumerate() {
            for key in crate::functor::tuples(n, lambda) {
                let v = self
                    .apply_key(i, &key, p)
                    .into_iter()
                    .map(|((j, k), c)| ((toff[j] + key_position(&self.target.parts[j], n, &k)) as u32, field.from_int(c as i64)))
                    .collect();
                cols.push(normalize(field, v));
            }
        }
        FFMatrix::from_columns(
            field,
            eval_space(&self.target.to_functor(), n),
            eval_space(&self.source.to_functor(), n),
            cols,
        )
    }

    /// The same map as a structural recipe for the functor engine.
    pub fn to_natmap(&self) -> NatMap {
        let blocks = self
            .terms
            .iter()
            .map(|t| {
                let lambda = &self.source.parts[t.src];
                let mu = &self.target.parts[t.tgt];
                (t.src, t.tgt, NatMap::Linear(vec![(t.coef, matrix_recipe(lambda, mu, &t.matrix))]))
            })
            .collect();
        NatMap::Matrix {
            sources: self.source.parts.iter().map(|l| FunctorExpr::sym_tensor(l)).collect(),
            targets: self.target.parts.iter().map(|l| FunctorExpr::sym_tensor(l)).collect(),
            blocks,
        }
    }
}

impl fmt::Display for SymHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}:", self.source, self.target)?;
        for t in &self.terms {
            write!(f, " {:+}·{:?}[{}→{}]", t.coef, t.matrix, t.src, t.tgt)?;
        }
        Ok(())
    }
}

fn diag(l: &[usize]) -> HomMatrix {
    (0..l.len()).map(|i| (0..l.len()).map(|j| if i == j { l[i] } else { 0 }).collect()).collect()
}

/// The squarefree key `x_0 ⋯ x_{λ_1-1} ⊗ x_{λ_1} ⋯` and the source block of each letter.
pub(crate) fn multilinear_base(lambda: &[usize]) -> (SymKey, Vec<usize>) {
    let mut key = Vec::with_capacity(lambda.len());
    let mut block_of = Vec::new();
    let mut v = 0u32;
    for (i, &k) in lambda.iter().enumerate() {
        key.push((v..v + k as u32).collect());
        block_of.extend(std::iter::repeat(i).take(k));
        v += k as u32;
    }
    (key, block_of)
}

/// Reads off hom-basis coordinates from the image of the squarefree base key:
/// the basis map `A` sends it to the sum of all output keys of type `A`, so the
/// coefficient of any single key of that type is the coordinate.
fn decompose_multilinear(
    src: usize,
    block_of: &[usize],
    nblocks: usize,
    image: &BTreeMap<(usize, SymKey), i64>,
) -> Vec<HomTerm> {
    let mut seen: BTreeMap<(usize, HomMatrix), i64> = BTreeMap::new();
    for ((tgt, y), &c) in image {
        let a = crate::functor::symtensor::type_matrix(y, block_of, nblocks);
        seen.entry((*tgt, a)).or_insert(c);
    }
    seen.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((tgt, matrix), coef)| HomTerm { src, tgt, matrix, coef })
        .collect()
}

/// `S^λ -> S^μ` for one hom matrix as comultiplications, a factor
/// permutation and multiplications.
fn matrix_recipe(lambda: &[usize], mu: &[usize], a: &HomMatrix) -> NatMap {
    let (r, c) = (lambda.len(), mu.len());
    let comul = NatMap::Tensor(a.iter().map(|row| NatMap::Comultiply(row.clone())).collect());
    let factors: Vec<FunctorExpr> = a.iter().flat_map(|row| row.iter().map(|&x| FunctorExpr::Sym(x))).collect();
    let sigma: Vec<usize> = (0..c).flat_map(|j| (0..r).map(move |i| i * c + j)).collect();
    let perm = NatMap::Permute { factors, sigma };
    let mul = NatMap::Tensor((0..c).map(|j| NatMap::Multiply((0..r).map(|i| a[i][j]).collect())).collect());
    NatMap::compose(mul, NatMap::compose(perm, comul))
}

/// Canonical basis of natural maps `S^λ -> S^μ`.
pub fn hom_basis(lambda: &[usize], mu: &[usize]) -> Result<Vec<HomMatrix>> {
    if lambda.iter().sum::<usize>() != mu.iter().sum::<usize>() {
        return Err(Error::Degree(format!("{lambda:?} and {mu:?} have different degrees")));
    }
    Ok(hom_matrices(lambda, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn basis_examples() {
        assert_eq!(hom_basis(&[1], &[1]).unwrap(), vec![vec![vec![1]]]);
        assert_eq!(hom_basis(&[2], &[1, 1]).unwrap(), vec![vec![vec![1, 1]]]);
        assert_eq!(hom_basis(&[1, 1], &[1, 1]).unwrap().len(), 2);
        assert!(hom_basis(&[2], &[3]).is_err());
    }

    #[test]
    fn compose_multiply_after_comultiply() {
        // m ∘ Δ on S^2 is multiplication by binomial(2,1) = 2
        let f = SymHom::multiply(&[1, 1]).compose(&SymHom::comultiply(&[1, 1])).unwrap();
        assert_eq!(f, SymHom::identity(&SymSum::single(vec![2])).scale(2));
        // Δ ∘ m on S^1⊗S^1 is 1 + τ
        let g = SymHom::comultiply(&[1, 1]).compose(&SymHom::multiply(&[1, 1])).unwrap();
        let tau = SymHom::permutation(&[1, 1], &[1, 0]);
        assert_eq!(g, SymHom::identity(&SymSum::tensor_power(2)).add(&tau).unwrap());
    }

    #[test]
    fn eval_agrees_with_recipe() {
        let f = Field::prime(3).unwrap();
        let maps = [
            SymHom::comultiply(&[2, 1]),
            SymHom::multiply(&[1, 2]),
            SymHom::permutation(&[1, 2], &[1, 0]),
            SymHom::single(vec![2, 1], vec![1, 2], vec![vec![1, 1], vec![0, 1]], -1),
        ];
        for m in maps {
            for n in 1..=3 {
                let direct = m.eval(&f, n).unwrap();
                let recipe = m.to_natmap().eval(&f, n).unwrap();
                assert_eq!(direct, recipe, "{m} at n={n}");
            }
        }
    }
}
