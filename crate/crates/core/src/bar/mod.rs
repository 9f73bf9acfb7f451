//! The reduced bar construction of `S^*`, the double bar construction, and
//! the twist compatible coresolutions `J_d` of `Γ^d` extracted from it.
mod words;

pub use words::{shuffle, BarWord, InnerWord, Term};

use std::cmp::Reverse;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffalg::{BasedComplex, FFMatrix, FieldRef};
use crate::functor::combin::multiset_count;
use crate::functor::NatMap;
use crate::twistcat::{twist_lift, HomTerm, SymHom, SymSum};

/// Which algebra the bar construction is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BarLevel {
    /// `B̄(S^*)`.
    Symmetric,
    /// `B̄(B̄(S^*))`.
    Bar,
}

/// The polynomial-degree-`d` part of a bar construction as a chain complex
/// of sums of symmetric tensors: `diffs[k]` goes from bar degree `k + 1` to `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarComplex {
    pub level: BarLevel,
    pub d: usize,
    pub words: Vec<Vec<BarWord>>,
    pub objects: Vec<SymSum>,
    pub diffs: Vec<SymHom>,
}

/// Compositions of `d` into positive parts.
fn positive_compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    (1..=d)
        .flat_map(|first| {
            positive_compositions(d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Ways to cut a sequence of length `n >= 1` into consecutive nonempty runs.
fn cuts<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in 1..=items.len() {
        for mut rest in cuts(&items[k..]) {
            rest.insert(0, items[..k].to_vec());
            out.push(rest);
        }
    }
    out
}

fn word_order(w: &BarWord) -> (Reverse<Vec<usize>>, Vec<usize>) {
    (Reverse(w.inner.iter().map(|x| x.len()).collect()), w.flat())
}

/// All words of polynomial degree `d` at the given level, by bar degree.
fn enumerate(level: BarLevel, d: usize) -> BTreeMap<usize, Vec<BarWord>> {
    let mut out: BTreeMap<usize, Vec<BarWord>> = BTreeMap::new();
    for letters in positive_compositions(d) {
        let ws = match level {
            BarLevel::Symmetric => vec![BarWord::single(letters)],
            BarLevel::Bar => cuts(&letters).into_iter().map(|inner| BarWord { inner }).collect(),
        };
        for w in ws {
            out.entry(w.degree(level)).or_default().push(w);
        }
    }
    out
}

fn hom_from_terms(
    src_words: &[BarWord],
    tgt_words: &[BarWord],
    terms_of: impl Fn(&BarWord) -> Vec<Term>,
) -> Result<SymHom> {
    let source = SymSum::new(src_words.iter().map(|w| w.flat()).collect())?;
    let target = SymSum::new(tgt_words.iter().map(|w| w.flat()).collect())?;
    let index: BTreeMap<&BarWord, usize> = tgt_words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut terms = Vec::new();
    for (a, w) in src_words.iter().enumerate() {
        let lambda = w.flat();
        for t in terms_of(w) {
            let b = *index
                .get(&t.target)
                .ok_or_else(|| Error::Verification(format!("bar term {} of {} not enumerated", t.target, w)))?;
            let c = tgt_words[b].flat().len();
            let mut matrix = vec![vec![0; c]; lambda.len()];
            for (i, &j) in t.phi.iter().enumerate() {
                matrix[i][j] = lambda[i];
            }
            terms.push(HomTerm { src: a, tgt: b, matrix, coef: t.sign });
        }
    }
    SymHom::new(source, target, terms)
}

pub fn reduced_bar(level: BarLevel, d: usize) -> Result<BarComplex> {
    let by_degree = enumerate(level, d);
    let top = by_degree.keys().next_back().copied().unwrap_or(0);
    let mut words: Vec<Vec<BarWord>> = (0..=top).map(|k| by_degree.get(&k).cloned().unwrap_or_default()).collect();
    for ws in &mut words {
        ws.sort_by_key(word_order);
    }
    let objects = words
        .iter()
        .map(|ws| SymSum::new(ws.iter().map(|w| w.flat()).collect()))
        .collect::<Result<Vec<_>>>()?;
    let diffs = (0..top)
        .map(|k| hom_from_terms(&words[k + 1], &words[k], |w| w.differential(level)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BarComplex { level, d, words, objects, diffs })
}

/// Upper bound on `Σ_k dim J_d^k(k^m)`, available before any allocation.
pub fn bar_size_estimate(d: usize, m: usize) -> u128 {
    enumerate(BarLevel::Bar, d)
        .values()
        .flatten()
        .map(|w| w.flat().iter().map(|&k| multiset_count(m, k) as u128).product::<u128>())
        .sum()
}

/// A cochain complex of sums of symmetric tensors whose differentials are
/// twist compatible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistComplex {
    pub objects: Vec<SymSum>,
    /// `diffs[k] : J^k -> J^{k+1}`.
    pub diffs: Vec<SymHom>,
    /// Bar words labelling the summands, when built from a bar construction.
    pub words: Vec<Vec<BarWord>>,
}

impl TwistComplex {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Whether every `d ∘ d` vanishes as an integral natural map.
    pub fn is_complex(&self) -> Result<bool> {
        for w in self.diffs.windows(2) {
            if !w[1].compose(&w[0])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn evaluate(&self, field: &FieldRef, m: usize) -> Result<BasedComplex> {
        let objects = self.objects.iter().map(|s| crate::functor::eval_space(&s.to_functor(), m)).collect();
        let diffs = self.diffs.iter().map(|f| f.eval(field, m)).collect::<Result<Vec<FFMatrix>>>()?;
        BasedComplex::new(field, objects, diffs)
    }

    /// Lifts of all differentials in characteristic `p`.
    pub fn lifts(&self, p: u32) -> Result<Vec<Option<SymHom>>> {
        self.diffs.iter().map(|f| twist_lift(f, p)).collect()
    }
}

/// `J_d^k = B̄_{2d-k}` of the polynomial-degree-`d` double bar construction.
#[allow(non_snake_case)]
pub fn build_Jd(d: usize) -> Result<TwistComplex> {
    if d == 0 {
        return Err(Error::Degree("J_d needs d >= 1".into()));
    }
    let bar = reduced_bar(BarLevel::Bar, d)?;
    let top = 2 * d;
    let len = (0..=top).rev().take_while(|&k| k >= 1 && !bar.words[k].is_empty()).count();
    let objects = (0..len).map(|k| bar.objects[top - k].clone()).collect();
    let words = (0..len).map(|k| bar.words[top - k].clone()).collect();
    let diffs = (0..len.saturating_sub(1)).map(|k| bar.diffs[top - k - 1].clone()).collect();
    Ok(TwistComplex { objects, diffs, words })
}

/// The first differential `⊗^d -> ⊕_k ⊗^k⊗⊗²⊗⊗^{d-2-k}` with components `1 - τ_k`,
/// assembled independently of the bar construction.
pub fn expected_first_differential(j: &TwistComplex, d: usize) -> Result<SymHom> {
    let source = j.objects[0].clone();
    let target = j.objects.get(1).cloned().unwrap_or_else(|| SymSum::new(Vec::new()).expect("empty sum"));
    let mut terms = Vec::new();
    for k in 0..d.saturating_sub(1) {
        let mut inner: Vec<InnerWord> = vec![vec![1]; d - 1];
        inner[k] = vec![1, 1];
        let w = BarWord { inner };
        let b = j.words[1]
            .iter()
            .position(|x| *x == w)
            .ok_or_else(|| Error::Verification(format!("word {w} missing from J^1")))?;
        let id: Vec<Vec<usize>> = (0..d).map(|i| (0..d).map(|c| usize::from(i == c)).collect()).collect();
        let mut swap = id.clone();
        swap.swap(k, k + 1);
        terms.push(HomTerm { src: 0, tgt: b, matrix: id, coef: 1 });
        terms.push(HomTerm { src: 0, tgt: b, matrix: swap, coef: -1 });
    }
    SymHom::new(source, target, terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JdRow {
    pub dim: usize,
    pub homology: Vec<usize>,
    pub expected_h0: usize,
    /// `ker(J^0 -> J^1)` is the image of `Γ^d -> ⊗^d`.
    pub gamma_kernel: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JdReport {
    pub d: usize,
    pub p: u32,
    pub objects: Vec<String>,
    pub rows: Vec<JdRow>,
    pub all_lift: bool,
    pub is_complex: bool,
    pub pass: bool,
}

#[allow(non_snake_case)]
pub fn verify_Jd(d: usize, field: &FieldRef, dims: &[usize]) -> Result<JdReport> {
    let j = build_Jd(d)?;
    let is_complex = j.is_complex()?;
    let all_lift = j.lifts(field.p())?.iter().all(|l| l.is_some());
    let mut rows = Vec::new();
    for &m in dims {
        let c = j.evaluate(field, m)?;
        let homology = c.homology_dims();
        let expected_h0 = multiset_count(m, d);
        let incl = NatMap::DiagonalGamma(vec![1; d]).eval(field, m)?;
        let gamma_kernel = c.d(0).mul(&incl)?.is_zero() && incl.rank() == expected_h0 && homology[0] == expected_h0;
        let pass = gamma_kernel && homology.iter().skip(1).all(|&h| h == 0);
        rows.push(JdRow { dim: m, homology, expected_h0, gamma_kernel, pass });
    }
    let pass = is_complex && all_lift && rows.iter().all(|r| r.pass);
    Ok(JdReport {
        d,
        p: field.p(),
        objects: j.objects.iter().map(|s| s.to_string()).collect(),
        rows,
        all_lift,
        is_complex,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn differentials_square_to_zero() {
        for level in [BarLevel::Symmetric, BarLevel::Bar] {
            for d in 1..=4 {
                let b = reduced_bar(level, d).unwrap();
                for k in 1..b.diffs.len() {
                    assert!(b.diffs[k - 1].compose(&b.diffs[k]).unwrap().is_zero(), "{level:?} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn j2_is_one_minus_tau_then_multiply() {
        let j = build_Jd(2).unwrap();
        let parts: Vec<_> = j.objects.iter().map(|s| s.parts.clone()).collect();
        assert_eq!(parts, vec![vec![vec![1, 1]], vec![vec![1, 1]], vec![vec![2]]]);
        assert_eq!(j.diffs[0], expected_first_differential(&j, 2).unwrap());
        assert_eq!(j.diffs[1], SymHom::multiply(&[1, 1]));
    }

    #[test]
    fn first_differential_is_product_of_one_minus_tau() {
        for d in 2..=4 {
            let j = build_Jd(d).unwrap();
            assert_eq!(j.diffs[0], expected_first_differential(&j, d).unwrap(), "d={d}");
        }
    }

    #[test]
    fn jd_resolves_gamma() {
        for p in [2u32, 3] {
            let f = Field::prime(p).unwrap();
            for d in 1..=3 {
                let r = verify_Jd(d, &f, &[1, 2]).unwrap();
                assert!(r.pass, "p={p} d={d}: {r:?}");
                assert!(r.objects.len() <= 2 * d);
            }
        }
    }

    #[test]
    fn estimate_is_exact_total_dimension() {
        let f = Field::prime(2).unwrap();
        let j = build_Jd(3).unwrap();
        let c = j.evaluate(&f, 2).unwrap();
        let total: usize = (0..c.len()).map(|k| c.objects()[k].len()).sum();
        assert_eq!(bar_size_estimate(3, 2), total as u128);
    }
}
