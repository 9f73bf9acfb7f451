//! Troesch p-complexes `B_n = S^n(I^{⊕p})`, graded by slot and equipped with
//! the derivation induced by the slot shift, and their tensor products.
mod keyed;

pub use keyed::{KeyedComplex, KeyedNComplex, TKey};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{FFMatrix, FieldRef};
use crate::functor::combin::monomials;
use crate::functor::{FunctorExpr, NatMap};
use crate::pcomplex::{is_p_coresolution_with, NComplex};
use crate::twistcat::{HomTerm, SymHom, SymSum};

/// One summand `S^{i_0} ⊗ ... ⊗ S^{i_{p-1}}` of `B_n`, in degree `Σ k·i_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub composition: Vec<usize>,
    pub degree: usize,
}

impl Piece {
    pub fn functor(&self) -> FunctorExpr {
        FunctorExpr::sym_tensor(&self.composition)
    }
}

/// Source of the differential of `B_n`, so that another construction can be
/// substituted when a check fails.
pub trait TroeschDifferential: Send + Sync {
    fn name(&self) -> String;
    fn differential(&self, b: &TroeschComplex, t: usize) -> SymHom;
}

/// The derivation induced by the slot shift `V_k -> V_{k+1}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SlotShift;

impl TroeschDifferential for SlotShift {
    fn name(&self) -> String {
        "slot-shift".into()
    }

    fn differential(&self, b: &TroeschComplex, t: usize) -> SymHom {
        b.differential(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TroeschComplex {
    pub n: usize,
    pub p: usize,
    /// All pieces in lexicographic composition order.
    pub pieces: Vec<Piece>,
}

/// Compositions of `n` into `parts` nonnegative parts, lexicographic.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn build_troesch(n: usize, p: usize) -> TroeschComplex {
    let pieces = compositions(n, p)
        .into_iter()
        .map(|c| {
            let degree = c.iter().enumerate().map(|(k, i)| k * i).sum();
            Piece { composition: c, degree }
        })
        .collect();
    TroeschComplex { n, p, pieces }
}

impl TroeschComplex {
    /// Number of degrees, `n(p-1) + 1`.
    pub fn len(&self) -> usize {
        self.n * (self.p - 1) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pieces_in(&self, t: usize) -> Vec<&Piece> {
        self.pieces.iter().filter(|x| x.degree == t).collect()
    }

    pub fn object(&self, t: usize) -> SymSum {
        SymSum { parts: self.pieces_in(t).into_iter().map(|x| x.composition.clone()).collect() }
    }

    /// The differential from degree `t` as a natural map: on the piece
    /// `(i_0, ..)` it moves one letter from slot `k` to slot `k+1`, which is
    /// the comultiplication `S^{i_k} -> S^{i_k - 1} ⊗ S^1` followed by
    /// multiplication into slot `k+1`.
    pub fn differential(&self, t: usize) -> SymHom {
        let (src, tgt) = (self.object(t), self.object(t + 1));
        let mut terms = Vec::new();
        for (a, c) in src.parts.iter().enumerate() {
            for k in 0..self.p.saturating_sub(1) {
                if c[k] == 0 {
                    continue;
                }
                let mut c2 = c.clone();
                c2[k] -= 1;
                c2[k + 1] += 1;
                let b = tgt.parts.iter().position(|x| *x == c2).expect("target piece exists");
                let mut matrix: Vec<Vec<usize>> =
                    (0..self.p).map(|i| (0..self.p).map(|j| if i == j { c[i] } else { 0 }).collect()).collect();
                matrix[k][k] -= 1;
                matrix[k][k + 1] = 1;
                terms.push(HomTerm { src: a, tgt: b, matrix, coef: 1 });
            }
        }
        SymHom::new(src, tgt, terms).expect("derivation terms are well formed")
    }

    pub fn differential_recipe(&self, t: usize) -> NatMap {
        self.differential(t).to_natmap()
    }

    /// Evaluation at `V = k^m` through the generic functor engine.
    pub fn evaluate(&self, field: &FieldRef, m: usize) -> Result<NComplex> {
        let objects = (0..self.len()).map(|t| crate::functor::eval_space(&self.object(t).to_functor(), m)).collect();
        let diffs = (0..self.len() - 1)
            .map(|t| self.differential_recipe(t).eval(field, m))
            .collect::<Result<Vec<FFMatrix>>>()?;
        NComplex::new(field, self.p, objects, diffs)
    }

    /// Evaluation at `V = k^m` with keys over `W = V^{⊕p}`.
    pub fn evaluate_keyed(&self, field: &FieldRef, m: usize) -> Result<KeyedNComplex> {
        self.evaluate_keyed_with(&SlotShift, field, m)
    }

    pub fn evaluate_keyed_with(&self, diff: &dyn TroeschDifferential, field: &FieldRef, m: usize) -> Result<KeyedNComplex> {
        if field.p() as usize != self.p {
            return Err(Error::OrderMismatch { order: self.p, p: field.p() });
        }
        let objects = (0..self.len()).map(|t| crate::functor::eval_space(&self.object(t).to_functor(), m)).collect();
        let diffs = (0..self.len() - 1)
            .map(|t| diff.differential(self, t).eval(field, m))
            .collect::<Result<Vec<FFMatrix>>>()?;
        let keys = (0..self.len())
            .map(|t| {
                self.pieces_in(t)
                    .into_iter()
                    .flat_map(|x| {
                        crate::functor::tuples(m, &x.composition).into_iter().map(|slots| {
                            let mut w: Vec<u32> = slots
                                .iter()
                                .enumerate()
                                .flat_map(|(k, mono)| mono.iter().map(move |&v| (k * m) as u32 + v))
                                .collect();
                            w.sort_unstable();
                            TKey::new(0, vec![w])
                        })
                    })
                    .collect()
            })
            .collect();
        KeyedNComplex::new(NComplex::new_unchecked(field, self.p, objects, diffs)?, keys, m, 1)
    }
}

/// `B_{n_1} ⊗ ... ⊗ B_{n_k}` evaluated at `k^m`.
pub fn troesch_tensor(ns: &[usize], field: &FieldRef, m: usize) -> Result<KeyedNComplex> {
    let p = field.p() as usize;
    let mut acc = KeyedNComplex::unit(field, p, m)?;
    for &n in ns {
        acc = acc.tensor_p(&build_troesch(n, p).evaluate_keyed(field, m)?)?;
    }
    Ok(acc)
}

/// `B_{pμ}` with its augmentation `S^μ(I^(1)) -> S^{pμ}` at `k^m`.
#[allow(non_snake_case)]
pub fn build_B_tuple(mu: &[usize], field: &FieldRef, m: usize) -> Result<(KeyedNComplex, FFMatrix)> {
    if mu.iter().any(|&x| x == 0) {
        return Err(Error::Degree(format!("{mu:?} has a zero entry")));
    }
    let p = field.p() as usize;
    let ns: Vec<usize> = mu.iter().map(|&x| x * p).collect();
    let c = troesch_tensor(&ns, field, m)?;
    let aug = NatMap::FrobeniusIncl { lambda: mu.to_vec(), p: field.p() }.eval(field, m)?;
    Ok((c, aug))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TroeschRow {
    pub dim: usize,
    pub s: usize,
    pub homology: Vec<usize>,
    pub expected_h0: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TroeschReport {
    pub n: usize,
    pub p: usize,
    pub differential: String,
    pub rows: Vec<TroeschRow>,
    pub pass: bool,
}

/// Checks that every contraction of `B_n(k^m)` is exact in positive degrees
/// and that `H^0` is `S^{n/p}(V^(1))` through the Frobenius inclusion when
/// `p | n`, and zero otherwise.
pub fn verify_troesch(n: usize, field: &FieldRef, dims: &[usize]) -> Result<TroeschReport> {
    verify_troesch_with(&SlotShift, n, field, dims)
}

pub fn verify_troesch_with(diff: &dyn TroeschDifferential, n: usize, field: &FieldRef, dims: &[usize]) -> Result<TroeschReport> {
    let p = field.p() as usize;
    let b = build_troesch(n, p);
    let per_dim = dims
        .par_iter()
        .map(|&m| -> Result<Vec<TroeschRow>> {
            let c = b.evaluate_keyed_with(diff, field, m)?;
            c.complex.check_nilpotent()?;
            let aug = if n % p == 0 {
                Some(NatMap::FrobeniusIncl { lambda: vec![n / p], p: field.p() }.eval(field, m)?)
            } else {
                None
            };
            let expected = if n % p == 0 { monomials(m, n / p).len() } else { 0 };
            let blocks: Vec<_> = (1..p).map(|s| c.contraction_content(s)).collect();
            let report = is_p_coresolution_with(&c.complex, aug.as_ref(), |s, k| {
                k.homology_dims_blocked(|deg, i| blocks[s - 1][deg][i].clone()).unwrap_or_else(|_| k.homology_dims())
            })?;
            Ok(report
                .per_s
                .into_iter()
                .map(|h| {
                    let ok = h.dims.first().copied().unwrap_or(0) == expected
                        && h.dims.iter().skip(1).all(|&x| x == 0)
                        && report.augmentation_ok;
                    TroeschRow { dim: m, s: h.s, homology: h.dims, expected_h0: expected, pass: ok }
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<TroeschRow> = per_dim.into_iter().flatten().collect();
    let pass = rows.iter().all(|r| r.pass);
    Ok(TroeschReport { n, p, differential: diff.name(), rows, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn pieces_at_two() {
        let b = build_troesch(2, 2);
        let got: Vec<(Vec<usize>, usize)> = b.pieces.iter().map(|x| (x.composition.clone(), x.degree)).collect();
        assert_eq!(got, vec![(vec![0, 2], 2), (vec![1, 1], 1), (vec![2, 0], 0)]);
        let b = build_troesch(4, 3);
        let top = b.pieces.iter().find(|x| x.composition == vec![0, 0, 4]).unwrap();
        assert_eq!(top.degree, 8);
    }

    #[test]
    fn keyed_and_generic_routes_agree() {
        for (p, n) in [(2u32, 2usize), (2, 3), (3, 3), (3, 2)] {
            let f = Field::prime(p).unwrap();
            let b = build_troesch(n, p as usize);
            for m in 1..=2 {
                let generic = b.evaluate(&f, m).unwrap();
                let keyed = b.evaluate_keyed(&f, m).unwrap();
                assert_eq!(generic.dims(), keyed.complex.dims());
                for t in 0..generic.len().saturating_sub(1) {
                    assert_eq!(generic.d(t), keyed.complex.d(t), "p={p} n={n} m={m} t={t}");
                }
            }
        }
    }

    #[test]
    fn keys_have_their_degree() {
        let f = Field::prime(3).unwrap();
        let c = build_troesch(3, 3).evaluate_keyed(&f, 2).unwrap();
        for (t, ks) in c.keys.iter().enumerate() {
            assert!(ks.iter().all(|k| k.degree(2) == t));
        }
    }

    #[test]
    fn b2_at_two() {
        let f = Field::prime(2).unwrap();
        let r = verify_troesch(2, &f, &[2]).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows[0].homology, vec![2, 0, 0]);
    }

    #[test]
    fn b1_at_three_is_acyclic() {
        let f = Field::prime(3).unwrap();
        let c = build_troesch(1, 3).evaluate_keyed(&f, 1).unwrap();
        assert_eq!(c.complex.dims(), vec![1, 1, 1]);
        assert!(verify_troesch(1, &f, &[1, 2]).unwrap().pass);
    }

    #[test]
    fn tuple_augmentation() {
        let f = Field::prime(2).unwrap();
        let (c, aug) = build_B_tuple(&[1, 1], &f, 2).unwrap();
        let r = crate::pcomplex::is_p_coresolution(&c.complex, Some(&aug)).unwrap();
        assert!(r.exact);
        assert_eq!(r.per_s[0].dims[0], 4);
    }

    struct Zero;

    impl TroeschDifferential for Zero {
        fn name(&self) -> String {
            "zero".into()
        }

        fn differential(&self, b: &TroeschComplex, t: usize) -> SymHom {
            SymHom::zero(b.object(t), b.object(t + 1))
        }
    }

    #[test]
    fn substituted_differential_is_used() {
        let f = Field::prime(2).unwrap();
        let r = verify_troesch_with(&Zero, 2, &f, &[1]).unwrap();
        assert_eq!(r.differential, "zero");
        assert!(!r.pass);
    }
}
