//! Basis-level arithmetic on tensor products of symmetric powers.
//!
//! A basis element of `S^{λ_1} ⊗ ... ⊗ S^{λ_r}` over an ordered alphabet is a
//! [`SymKey`]: one sorted multiset of letters per factor.

use std::collections::HashMap;

use super::combin::{merge, splittings, Multiset};

pub type SymKey = Vec<Multiset>;

/// Nonnegative integer matrix indexing a canonical natural map
/// `S^λ -> S^μ` (row sums `λ`, column sums `μ`).
pub type HomMatrix = Vec<Vec<usize>>;

/// Applies the comultiply-then-multiply map of `a` to `key`, with
/// coefficients reduced modulo `p`.
pub fn apply_hom_matrix(a: &HomMatrix, key: &[Multiset], p: u32) -> Vec<(SymKey, u32)> {
    let c = a.first().map_or(0, |r| r.len());
    let mut acc: Vec<(SymKey, u64)> = vec![(vec![Vec::new(); c], 1)];
    for (row, m) in a.iter().zip(key) {
        let splits = splittings(m, row, p);
        let mut next = Vec::with_capacity(acc.len() * splits.len());
        for (outs, coef) in &acc {
            for (parts, cf) in &splits {
                let o: SymKey = outs.iter().zip(parts).map(|(x, y)| merge(x, y)).collect();
                next.push((o, coef * *cf as u64 % p as u64));
            }
        }
        acc = next;
    }
    collect_mod(acc.into_iter().map(|(k, c)| (k, c as u32)), p)
}

/// Sums coefficients of equal keys modulo `p`, drops zeros, sorts by key.
pub fn collect_mod(terms: impl IntoIterator<Item = (SymKey, u32)>, p: u32) -> Vec<(SymKey, u32)> {
    let mut map: HashMap<SymKey, u32> = HashMap::new();
    for (k, c) in terms {
        let e = map.entry(k).or_insert(0);
        *e = (*e + c) % p;
    }
    let mut out: Vec<_> = map.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort_unstable();
    out
}

/// Factor-wise multiplication of a key whose letters are themselves
/// multisets: each factor's letters are merged into one multiset.
pub fn multiply_letters(key: &[Multiset], letters: &[Multiset]) -> SymKey {
    key.iter()
        .map(|m| m.iter().fold(Vec::new(), |acc, &l| merge(&acc, &letters[l as usize])))
        .collect()
}

/// Counts matrix of a multilinear output key: entry `(i, j)` is the number of
/// letters of output factor `j` lying in the `i`-th source block.
pub fn type_matrix(y: &[Multiset], block_of: &[usize], nblocks: usize) -> HomMatrix {
    let mut a = vec![vec![0; y.len()]; nblocks];
    for (j, m) in y.iter().enumerate() {
        for &v in m {
            a[block_of[v as usize]][j] += 1;
        }
    }
    a
}

/// All nonnegative integer matrices with row sums `lambda` and column sums
/// `mu`, in lexicographic order of their row-major entries.
pub fn hom_matrices(lambda: &[usize], mu: &[usize]) -> Vec<HomMatrix> {
    fn fill(i: usize, j: usize, lambda: &[usize], rows: &mut Vec<usize>, cols: &mut Vec<usize>, cur: &mut HomMatrix, out: &mut Vec<HomMatrix>) {
        let c = cols.len();
        if i == lambda.len() {
            if cols.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        if j == c {
            if rows[i] == 0 {
                fill(i + 1, 0, lambda, rows, cols, cur, out);
            }
            return;
        }
        let hi = rows[i].min(cols[j]);
        for v in 0..=hi {
            // the last column must absorb what remains of the row
            if j + 1 == c && v != rows[i] {
                continue;
            }
            cur[i][j] = v;
            rows[i] -= v;
            cols[j] -= v;
            fill(i, j + 1, lambda, rows, cols, cur, out);
            rows[i] += v;
            cols[j] += v;
        }
        cur[i][j] = 0;
    }
    if lambda.iter().sum::<usize>() != mu.iter().sum::<usize>() {
        return Vec::new();
    }
    if mu.is_empty() {
        return if lambda.iter().all(|&x| x == 0) { vec![vec![Vec::new(); lambda.len()]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut cur = vec![vec![0; mu.len()]; lambda.len()];
    fill(0, 0, lambda, &mut lambda.to_vec(), &mut mu.to_vec(), &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_matrix_counts() {
        assert_eq!(hom_matrices(&[1], &[1]), vec![vec![vec![1]]]);
        assert_eq!(hom_matrices(&[2], &[1, 1]), vec![vec![vec![1, 1]]]);
        assert_eq!(hom_matrices(&[1, 1], &[1, 1]).len(), 2);
        // 2x2 contingency tables with margins (2,2),(2,2)
        assert_eq!(hom_matrices(&[2, 2], &[2, 2]).len(), 3);
        assert!(hom_matrices(&[2], &[1]).is_empty());
    }

    #[test]
    fn swap_and_multiply() {
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(apply_hom_matrix(&swap, &[vec![0], vec![1]], 3), vec![(vec![vec![1], vec![0]], 1)]);
        let mul = vec![vec![1], vec![1]];
        assert_eq!(apply_hom_matrix(&mul, &[vec![1], vec![0]], 3), vec![(vec![vec![0, 1]], 1)]);
    }

    #[test]
    fn comultiply_coefficients() {
        // x^2 -> x⊗x with coefficient 2
        let d = vec![vec![1, 1]];
        assert_eq!(apply_hom_matrix(&d, &[vec![0, 0]], 3), vec![(vec![vec![0], vec![0]], 2)]);
        assert!(apply_hom_matrix(&d, &[vec![0, 0]], 2).is_empty());
    }
}
