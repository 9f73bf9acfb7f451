//! Seeded random N-complexes, built as sums of identity segments and then
//! conjugated by random invertible matrices in each degree.

use rand::Rng;

use super::ncomplex::NComplex;
use crate::ffalg::{BasedComplex, Basis, Elem, FFMatrix, FieldRef};

pub fn random_invertible(field: &FieldRef, rng: &mut impl Rng, n: usize) -> FFMatrix {
    loop {
        let trip: Vec<(usize, usize, Elem)> = (0..n * n)
            .map(|k| (k / n, k % n, field.elem(rng.gen_range(0..field.q())).unwrap()))
            .collect();
        let m = FFMatrix::from_triplets(field, Basis::indexed(n), Basis::indexed(n), trip).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

pub fn random_matrix(field: &FieldRef, rng: &mut impl Rng, rows: usize, cols: usize) -> FFMatrix {
    let trip: Vec<(usize, usize, Elem)> = (0..rows * cols)
        .map(|k| (k / cols, k % cols, field.elem(rng.gen_range(0..field.q())).unwrap()))
        .collect();
    FFMatrix::from_triplets(field, Basis::indexed(rows), Basis::indexed(cols), trip).unwrap()
}

/// Random N-complex with at most `max_len` degrees and dimensions at most `max_dim`.
pub fn random_ncomplex(field: &FieldRef, rng: &mut impl Rng, order: usize, max_len: usize, max_dim: usize) -> NComplex {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut dims = vec![0usize; len];
    let mut segments = Vec::new();
    for _ in 0..rng.gen_range(1..=2 * len) {
        let start = rng.gen_range(0..len);
        let l = rng.gen_range(1..=order.min(len - start));
        if dims[start..start + l].iter().all(|&d| d < max_dim) {
            for d in &mut dims[start..start + l] {
                *d += 1;
            }
            segments.push((start, l));
        }
    }
    // basis vector of each segment in each degree it covers
    let mut pos = vec![0usize; len];
    let mut index: Vec<Vec<usize>> = Vec::new();
    for &(s, l) in &segments {
        index.push((s..s + l).map(|k| {
            pos[k] += 1;
            pos[k] - 1
        }).collect());
    }
    let objects: Vec<Basis> = dims.iter().map(|&d| Basis::indexed(d)).collect();
    let conj: Vec<FFMatrix> = dims.iter().map(|&d| random_invertible(field, rng, d)).collect();
    let mut diffs = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let mut trip = Vec::new();
        for (seg, &(s, l)) in segments.iter().enumerate() {
            if s <= k && k + 1 < s + l {
                trip.push((index[seg][k + 1 - s], index[seg][k - s], field.one()));
            }
        }
        let d = FFMatrix::from_triplets(field, objects[k + 1].clone(), objects[k].clone(), trip).unwrap();
        let inv = conj[k].inverse().unwrap();
        diffs.push(conj[k + 1].mul(&d).unwrap().mul(&inv).unwrap());
    }
    NComplex::new(field, order, objects, diffs).expect("segments give an N-complex")
}

pub fn random_complex(field: &FieldRef, rng: &mut impl Rng, max_len: usize, max_dim: usize) -> BasedComplex {
    random_ncomplex(field, rng, 2, max_len, max_dim).to_complex().unwrap()
}
