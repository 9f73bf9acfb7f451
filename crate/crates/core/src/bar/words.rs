use std::fmt;

use serde::{Deserialize, Serialize};

use super::BarLevel;

/// `[s_1|...|s_k]` with `s_i ∈ S^{a_i}`, stored as the degrees `a_i`.
pub type InnerWord = Vec<usize>;

/// A word of the double bar construction `[w_1|...|w_n]` with inner words
/// `w_i`. For the single bar construction `inner` has exactly one entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BarWord {
    pub inner: Vec<InnerWord>,
}

/// One summand of a differential applied to a word: a sign, the target word,
/// and where each flat tensor factor of the source goes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub sign: i64,
    pub target: BarWord,
    pub phi: Vec<usize>,
}

fn parity(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_{i=1}^{k-1} (-1)^i [..|s_i s_{i+1}|..]`.
fn inner_d(w: &[usize]) -> Vec<(i64, InnerWord, Vec<usize>)> {
    (0..w.len().saturating_sub(1))
        .map(|j| {
            let mut t = w.to_vec();
            let merged = t.remove(j + 1);
            t[j] += merged;
            let phi = (0..w.len()).map(|q| if q <= j { q } else { q - 1 }).collect();
            (parity(j + 1), t, phi)
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// The shuffle product `u * v` with the Koszul sign, each letter having
/// degree one. `phi` indexes the flat factors of `u` followed by those of `v`.
pub fn shuffle(u: &[usize], v: &[usize]) -> Vec<(i64, InnerWord, Vec<usize>)> {
    let (a, b) = (u.len(), v.len());
    combinations(a + b, a)
        .into_iter()
        .map(|pos_u| {
            let mut word = vec![0; a + b];
            let mut phi = vec![0; a + b];
            let mut is_u = vec![false; a + b];
            for (r, &q) in pos_u.iter().enumerate() {
                word[q] = u[r];
                phi[r] = q;
                is_u[q] = true;
            }
            let mut inversions = 0;
            let mut r = 0;
            for q in 0..a + b {
                if !is_u[q] {
                    word[q] = v[r];
                    phi[a + r] = q;
                    inversions += pos_u.iter().filter(|&&x| x > q).count();
                    r += 1;
                }
            }
            (parity(inversions), word, phi)
        })
        .collect()
}

impl BarWord {
    pub fn single(w: InnerWord) -> Self {
        BarWord { inner: vec![w] }
    }

    /// Degrees of the flat tensor factors.
    pub fn flat(&self) -> Vec<usize> {
        self.inner.concat()
    }

    pub fn poly_degree(&self) -> usize {
        self.inner.iter().flatten().sum()
    }

    pub fn degree(&self, level: BarLevel) -> usize {
        let letters: usize = self.inner.iter().map(|w| w.len()).sum();
        match level {
            BarLevel::Symmetric => letters,
            BarLevel::Bar => letters + self.inner.len(),
        }
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = vec![0];
        for w in &self.inner {
            out.push(out.last().unwrap() + w.len());
        }
        out
    }

    /// Replaces inner words `i..i+width` by `w`, with `local` the flat map on
    /// the replaced factors.
    fn splice(&self, i: usize, width: usize, w: InnerWord, local: &[usize], sign: i64) -> Term {
        let off = self.offsets();
        let (start, end) = (off[i], off[i + width]);
        let shrink = (end - start) - w.len();
        let phi = (0..off[self.inner.len()])
            .map(|q| {
                if q < start {
                    q
                } else if q < end {
                    start + local[q - start]
                } else {
                    q - shrink
                }
            })
            .collect();
        let mut inner = self.inner[..i].to_vec();
        inner.push(w);
        inner.extend_from_slice(&self.inner[i + width..]);
        Term { sign, target: BarWord { inner }, phi }
    }

    /// The homological differential, lowering the bar degree by one.
    pub fn differential(&self, level: BarLevel) -> Vec<Term> {
        match level {
            BarLevel::Symmetric => inner_d(&self.inner[0])
                .into_iter()
                .map(|(s, w, phi)| self.splice(0, 1, w, &phi, s))
                .collect(),
            BarLevel::Bar => {
                let n = self.inner.len();
                let mut e = vec![0];
                for w in &self.inner {
                    e.push(e.last().unwrap() + w.len() + 1);
                }
                let mut out = Vec::new();
                for i in 0..n {
                    let s0 = -parity(e[i]);
                    for (s, w, phi) in inner_d(&self.inner[i]) {
                        out.push(self.splice(i, 1, w, &phi, s0 * s));
                    }
                }
                for i in 0..n.saturating_sub(1) {
                    let s0 = parity(e[i + 1]);
                    for (s, w, phi) in shuffle(&self.inner[i], &self.inner[i + 1]) {
                        out.push(self.splice(i, 2, w, &phi, s0 * s));
                    }
                }
                out
            }
        }
    }
}

fn fmt_inner(w: &[usize]) -> String {
    format!("[{}]", w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("|"))
}

impl fmt::Display for BarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.len() == 1 {
            return write!(f, "{}", fmt_inner(&self.inner[0]));
        }
        write!(f, "[{}]", self.inner.iter().map(|w| fmt_inner(w)).collect::<Vec<_>>().join("|"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffle_of_two_letters() {
        let s = shuffle(&[1], &[2]);
        assert_eq!(s, vec![(1, vec![1, 2], vec![0, 1]), (-1, vec![2, 1], vec![1, 0])]);
        assert_eq!(shuffle(&[1, 1], &[1]).len(), 3);
    }

    #[test]
    fn inner_merges() {
        let d = inner_d(&[1, 2, 3]);
        assert_eq!(d[0], (-1, vec![3, 3], vec![0, 0, 1]));
        assert_eq!(d[1], (1, vec![1, 5], vec![0, 1, 1]));
    }

    #[test]
    fn outer_terms_of_a_pair() {
        let w = BarWord { inner: vec![vec![1], vec![1]] };
        let t = w.differential(BarLevel::Bar);
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|x| x.target.inner == vec![vec![1, 1]]));
        assert_eq!(t.iter().map(|x| x.sign).sum::<i64>(), 0);
    }
}
