//! Monomials, multisets and multinomial coefficients.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// A multiset of variable indices, sorted.
pub type Multiset = Vec<u32>;

type MonoCache = Mutex<HashMap<(usize, usize), (Arc<Vec<Multiset>>, Arc<HashMap<Multiset, u32>>)>>;

fn mono_cache() -> &'static MonoCache {
    static C: OnceLock<MonoCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of multisets of size `d` over `m` letters.
pub fn multiset_count(m: usize, d: usize) -> usize {
    if m == 0 {
        return usize::from(d == 0);
    }
    binomial((m + d - 1) as u64, d as u64) as usize
}

fn build_monomials(m: usize, d: usize) -> Vec<Multiset> {
    let mut out = Vec::with_capacity(multiset_count(m, d));
    let mut cur = vec![0u32; d];
    if d == 0 {
        return vec![Vec::new()];
    }
    if m == 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next non-decreasing tuple in lexicographic order
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (cur[i] as usize) < m - 1 {
                let v = cur[i] + 1;
                for x in &mut cur[i..] {
                    *x = v;
                }
                break;
            }
        }
    }
}

/// Degree-`d` monomials in `m` variables as sorted index tuples, lexicographic.
pub fn monomials(m: usize, d: usize) -> Arc<Vec<Multiset>> {
    monomial_tables(m, d).0
}

/// Index of each monomial in [`monomials`].
pub fn monomial_index(m: usize, d: usize) -> Arc<HashMap<Multiset, u32>> {
    monomial_tables(m, d).1
}

fn monomial_tables(m: usize, d: usize) -> (Arc<Vec<Multiset>>, Arc<HashMap<Multiset, u32>>) {
    if let Some(t) = mono_cache().lock().unwrap().get(&(m, d)) {
        return t.clone();
    }
    let list = build_monomials(m, d);
    let index = list.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect();
    let t = (Arc::new(list), Arc::new(index));
    mono_cache().lock().unwrap().insert((m, d), t.clone());
    t
}

/// Strictly increasing `d`-subsets of `0..m`, lexicographic.
pub fn subsets(m: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(m: u32, d: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in start..m {
            cur.push(v);
            rec(m, d, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m as u32, d, 0, &mut Vec::new(), &mut out);
    out
}

/// `(variable, multiplicity)` pairs of a sorted multiset.
pub fn counts(m: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &v in m {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

pub fn merge(a: &[u32], b: &[u32]) -> Multiset {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Binomial coefficients modulo a prime, by Pascal's rule.
pub struct BinomMod {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl BinomMod {
    pub fn new(p: u32, max_n: usize) -> Self {
        let p = p as u64;
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut r = vec![1u64; n + 1];
            for k in 1..n {
                r[k] = (prev[k - 1] + prev[k]) % p;
            }
            rows.push(r);
        }
        BinomMod { p, rows }
    }

    pub fn get(&mut self, n: usize, k: usize) -> u64 {
        if k > n {
            return 0;
        }
        if n >= self.rows.len() {
            *self = BinomMod::new(self.p as u32, n.max(2 * self.rows.len()));
        }
        self.rows[n][k]
    }
}

/// All ways to split a multiset into an ordered tuple of sub-multisets of
/// the given sizes, with the multinomial multiplicity of each split reduced
/// modulo `p`. Splits with multiplicity divisible by `p` are omitted.
pub fn splittings(m: &[u32], sizes: &[usize], p: u32) -> Vec<(Vec<Multiset>, u32)> {
    let c = counts(m);
    let mut binom = BinomMod::new(p, m.len().max(1));
    let mut out = Vec::new();
    let mut parts: Vec<Multiset> = vec![Vec::new(); sizes.len()];
    let mut cap: Vec<usize> = sizes.to_vec();
    if sizes.iter().sum::<usize>() != m.len() {
        return out;
    }
    fn rec(
        c: &[(u32, usize)],
        k: usize,
        parts: &mut Vec<Multiset>,
        cap: &mut Vec<usize>,
        coef: u64,
        binom: &mut BinomMod,
        p: u64,
        out: &mut Vec<(Vec<Multiset>, u32)>,
    ) {
        if k == c.len() {
            if cap.iter().all(|&x| x == 0) {
                out.push((parts.clone(), coef as u32));
            }
            return;
        }
        let (v, n) = c[k];
        distribute(c, k, v, n, 0, parts, cap, coef, binom, p, out);
    }
    #[allow(clippy::too_many_arguments)]
    fn distribute(
        c: &[(u32, usize)],
        k: usize,
        v: u32,
        left: usize,
        part: usize,
        parts: &mut Vec<Multiset>,
        cap: &mut Vec<usize>,
        coef: u64,
        binom: &mut BinomMod,
        p: u64,
        out: &mut Vec<(Vec<Multiset>, u32)>,
    ) {
        if part + 1 == parts.len() {
            if left > cap[part] {
                return;
            }
            cap[part] -= left;
            parts[part].extend(std::iter::repeat(v).take(left));
            rec(c, k + 1, parts, cap, coef, binom, p, out);
            let l = parts[part].len();
            parts[part].truncate(l - left);
            cap[part] += left;
            return;
        }
        for take in 0..=left.min(cap[part]) {
            let b = binom.get(left, take);
            if b == 0 {
                continue;
            }
            cap[part] -= take;
            parts[part].extend(std::iter::repeat(v).take(take));
            distribute(c, k, v, left - take, part + 1, parts, cap, coef * b % p, binom, p, out);
            let l = parts[part].len();
            parts[part].truncate(l - take);
            cap[part] += take;
        }
    }
    if sizes.is_empty() {
        if m.is_empty() {
            out.push((Vec::new(), 1));
        }
        return out;
    }
    rec(&c, 0, &mut parts, &mut cap, 1, &mut binom, p as u64, &mut out);
    out
}

/// Distinct permutations of a sorted multiset, lexicographic.
pub fn distinct_permutations(m: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = m.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        if n < 2 {
            return out;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else { return out };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        for m in 0..5 {
            for d in 0..5 {
                assert_eq!(monomials(m, d).len(), multiset_count(m, d));
            }
        }
        assert_eq!(*monomials(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn splitting_multiplicities() {
        // x^2 y into sizes (1,2): y|xx with multiplicity 1, x|xy with multiplicity 2
        let s = splittings(&[0, 0, 1], &[1, 2], 5);
        assert_eq!(s, vec![(vec![vec![1], vec![0, 0]], 1), (vec![vec![0], vec![0, 1]], 2)]);
        // over F_2 the second vanishes
        assert_eq!(splittings(&[0, 0, 1], &[1, 2], 2).len(), 1);
    }

    #[test]
    fn permutations_of_multiset() {
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
    }
}
