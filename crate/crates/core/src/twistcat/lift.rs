use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::symhom::{HomTerm, SymHom, SymSum};
use crate::error::{Error, Result};
use crate::ffalg::{FFMatrix, Field, FieldRef};
use crate::functor::combin::{binomial, Multiset};
use crate::functor::symtensor::{multiply_letters, type_matrix, HomMatrix, SymKey};
use crate::functor::NatMap;

/// Largest fiber of the multiplication map examined per block.
const FIBER_CAP: usize = 200_000;

/// Random keys per block in the check at dimension `D + 1`.
const SAMPLES: usize = 24;

/// The unique `f̄ : S^{pλ} -> S^{pμ}` with `f̄ ∘ m = m ∘ f(S^p)`, if it exists.
///
/// Both sides are natural maps out of quotients of `⊗^D`, `D = p|λ|`, so the
/// square is decided on the multilinear weight space of `k^D`, and by
/// symmetry on the fiber of the multiplication over one multilinear key.
/// Unknowns are the hom-basis coordinates of `f̄`; every equation involves a
/// single unknown, so the system is consistent iff all equations agree and
/// then its solution is unique.
pub fn twist_lift(f: &SymHom, p: u32) -> Result<Option<SymHom>> {
    let field = Field::prime(p)?;
    let f = f.reduced(p);
    let mut terms = Vec::new();
    for (i, lambda) in f.source.parts.iter().enumerate() {
        for j in 0..f.target.len() {
            match solve_block(&f, i, j, lambda, p)? {
                Some(t) => terms.extend(t),
                None => return Ok(None),
            }
        }
    }
    let fbar = SymHom::new(f.source.scaled(p as usize), f.target.scaled(p as usize), terms)?.reduced(p);
    if !check_lift_sampled(&f, &fbar, p, 0x5eed)? {
        return Err(Error::Verification(format!("lift of {f} fails the square at dimension D+1")));
    }
    if !check_frobenius(&f, &fbar, &field, 2)? {
        return Err(Error::Verification(format!("lift of {f} is incompatible with the Frobenius inclusion")));
    }
    Ok(Some(fbar))
}

fn solve_block(f: &SymHom, i: usize, j: usize, lambda: &[usize], p: u32) -> Result<Option<Vec<HomTerm>>> {
    let pu = p as usize;
    let big: Vec<usize> = lambda.iter().map(|&l| l * pu).collect();
    let mut block_of = Vec::new();
    for (r, &k) in big.iter().enumerate() {
        block_of.extend(std::iter::repeat(r).take(k));
    }
    let mut letters: Vec<Multiset> = Vec::new();
    let mut letter_id: HashMap<Multiset, u32> = HashMap::new();
    let fiber = fiber_keys(&big, pu, &mut letters, &mut letter_id)?;
    let blk = restrict(f, i, j);
    let mut global: Option<BTreeMap<HomMatrix, u32>> = None;
    for u in &fiber {
        let rhs = image_of_letters(&blk, u, &letters, p);
        let mut by_type: BTreeMap<HomMatrix, (u32, u128)> = BTreeMap::new();
        for (y, c) in &rhs {
            let a = type_matrix(y, &block_of, big.len());
            let e = by_type.entry(a).or_insert((*c, 0));
            if e.0 != *c {
                return Ok(None);
            }
            e.1 += 1;
        }
        let mut vals = BTreeMap::new();
        for (a, (c, count)) in by_type {
            if count != type_count(&a, &big) {
                return Ok(None);
            }
            vals.insert(a, c);
        }
        match &global {
            None => global = Some(vals),
            Some(g) if *g != vals => return Ok(None),
            _ => {}
        }
    }
    Ok(Some(
        global
            .unwrap_or_default()
            .into_iter()
            .map(|(matrix, c)| HomTerm { src: i, tgt: j, matrix, coef: c as i64 })
            .collect(),
    ))
}

/// The block `i -> j` of `f` as a map between single summands.
fn restrict(f: &SymHom, i: usize, j: usize) -> SymHom {
    let terms = f
        .terms()
        .iter()
        .filter(|t| t.src == i && t.tgt == j)
        .map(|t| HomTerm { src: 0, tgt: 0, ..t.clone() })
        .collect();
    SymHom::new(
        SymSum::single(f.source.parts[i].clone()),
        SymSum::single(f.target.parts[j].clone()),
        terms,
    )
    .expect("restriction of a valid map")
}

/// `m ∘ f(S^p)` applied to a key of `S^λ(S^p)` whose letters index `letters`.
fn image_of_letters(f: &SymHom, u: &SymKey, letters: &[Multiset], p: u32) -> Vec<(SymKey, u32)> {
    let mut out: BTreeMap<SymKey, u32> = BTreeMap::new();
    for ((_, k), c) in f.apply_key(0, u, p) {
        let y = multiply_letters(&k, letters);
        let e = out.entry(y).or_insert(0);
        *e = (*e + c) % p;
    }
    out.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Number of multilinear keys of a given type: factor `r` of the source
/// distributes its `big[r]` letters with counts `a[r]`.
fn type_count(a: &HomMatrix, big: &[usize]) -> u128 {
    a.iter()
        .zip(big)
        .map(|(row, &n)| {
            let mut left = n as u64;
            row.iter().fold(1u128, |acc, &k| {
                let b = binomial(left, k as u64) as u128;
                left -= k as u64;
                acc * b
            })
        })
        .product()
}

/// All keys of `S^λ(S^p)` multiplying to the squarefree key whose factor `r`
/// holds the consecutive letters of block `r` of sizes `big`.
fn fiber_keys(
    big: &[usize],
    p: usize,
    letters: &mut Vec<Multiset>,
    letter_id: &mut HashMap<Multiset, u32>,
) -> Result<Vec<SymKey>> {
    let mut per_factor: Vec<Vec<Multiset>> = Vec::new();
    let mut off = 0u32;
    let mut total = 1usize;
    for &k in big {
        let vars: Vec<u32> = (off..off + k as u32).collect();
        off += k as u32;
        let mut parts = Vec::new();
        set_partitions(&vars, p, &mut Vec::new(), &mut parts);
        let keys: Vec<Multiset> = parts
            .into_iter()
            .map(|blocks| {
                let mut ids: Vec<u32> = blocks
                    .into_iter()
                    .map(|b| {
                        *letter_id.entry(b.clone()).or_insert_with(|| {
                            letters.push(b);
                            letters.len() as u32 - 1
                        })
                    })
                    .collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        total = total.saturating_mul(keys.len());
        if total > FIBER_CAP {
            return Err(Error::Budget(format!("multiplication fiber exceeds {FIBER_CAP} keys")));
        }
        per_factor.push(keys);
    }
    let mut out: Vec<SymKey> = vec![Vec::new()];
    for keys in per_factor {
        out = out
            .into_iter()
            .flat_map(|t| {
                keys.iter().map(move |k| {
                    let mut t = t.clone();
                    t.push(k.clone());
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

fn set_partitions(rest: &[u32], p: usize, cur: &mut Vec<Multiset>, out: &mut Vec<Vec<Multiset>>) {
    let Some((&first, tail)) = rest.split_first() else {
        out.push(cur.clone());
        return;
    };
    for others in crate::functor::combin::subsets(tail.len(), p - 1) {
        let mut block = vec![first];
        block.extend(others.iter().map(|&o| tail[o as usize]));
        let remaining: Vec<u32> = tail.iter().enumerate().filter(|(k, _)| !others.contains(&(*k as u32))).map(|(_, &v)| v).collect();
        cur.push(block);
        set_partitions(&remaining, p, cur, out);
        cur.pop();
    }
}

/// Checks `f̄ ∘ m = m ∘ f(S^p)` on random keys at dimension `D + 1`.
pub fn check_lift_sampled(f: &SymHom, fbar: &SymHom, p: u32, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pu = p as usize;
    for (i, lambda) in f.source.parts.iter().enumerate() {
        let n = (pu * lambda.iter().sum::<usize>() + 1) as u32;
        for _ in 0..SAMPLES {
            let mut letters: Vec<Multiset> = Vec::new();
            let key: SymKey = lambda
                .iter()
                .map(|&k| {
                    let mut ids: Vec<u32> = (0..k)
                        .map(|_| {
                            let mut m: Multiset = (0..pu).map(|_| rng.gen_range(0..n)).collect();
                            m.sort_unstable();
                            letters.push(m);
                            letters.len() as u32 - 1
                        })
                        .collect();
                    ids.sort_unstable();
                    ids
                })
                .collect();
            // distinct letter ids may name equal monomials: dedupe before multiplying
            let (ckey, cletters) = canonical_letters(&key, &letters);
            let lhs_src = multiply_letters(&ckey, &cletters);
            let mut lhs: BTreeMap<(usize, SymKey), u32> = fbar.apply_key(i, &lhs_src, p).into_iter().collect();
            let mut rhs: BTreeMap<(usize, SymKey), u32> = BTreeMap::new();
            for ((j, k), c) in f.apply_key(i, &ckey, p) {
                let e = rhs.entry((j, multiply_letters(&k, &cletters))).or_insert(0);
                *e = (*e + c) % p;
            }
            rhs.retain(|_, c| *c != 0);
            lhs.retain(|_, c| *c != 0);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn canonical_letters(key: &SymKey, letters: &[Multiset]) -> (SymKey, Vec<Multiset>) {
    let mut distinct: Vec<Multiset> = key.iter().flatten().map(|&l| letters[l as usize].clone()).collect();
    distinct.sort();
    distinct.dedup();
    let id: HashMap<&Multiset, u32> = distinct.iter().enumerate().map(|(k, m)| (m, k as u32)).collect();
    let key = key
        .iter()
        .map(|m| {
            let mut v: Vec<u32> = m.iter().map(|&l| id[&letters[l as usize]]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    (key, distinct)
}

/// Evaluated square `f̄ ∘ m = m ∘ f(S^p)` on all of `S^λ(S^p)(k^n)`.
pub fn check_lift_square(f: &SymHom, fbar: &SymHom, field: &FieldRef, n: usize) -> Result<bool> {
    let p = field.p() as usize;
    let m = crate::functor::combin::monomials(n, p).len();
    let mult = |s: &SymSum| -> Result<FFMatrix> {
        let blocks = s
            .parts
            .iter()
            .map(|l| {
                let mut acc = FFMatrix::identity(field, crate::ffalg::Basis::indexed(1));
                for &k in l {
                    acc = acc.kron(&NatMap::PowerMult { n: k, p }.eval(field, n)?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        FFMatrix::direct_sum(field, &blocks)
    };
    let lhs = fbar.eval(field, n)?.mul(&mult(&f.source)?)?;
    let rhs = mult(&f.target)?.mul(&f.eval(field, m)?)?;
    Ok(lhs == rhs)
}

/// `f̄ ∘ incl = incl ∘ f(I^(1))` at `k^n`, where `incl : S^λ(I^(1)) -> S^{pλ}`.
pub fn check_frobenius(f: &SymHom, fbar: &SymHom, field: &FieldRef, n: usize) -> Result<bool> {
    let p = field.p();
    let incl = |s: &SymSum| -> Result<FFMatrix> {
        let blocks = s
            .parts
            .iter()
            .map(|l| NatMap::FrobeniusIncl { lambda: l.clone(), p }.eval(field, n))
            .collect::<Result<Vec<_>>>()?;
        FFMatrix::direct_sum(field, &blocks)
    };
    let twisted = f.eval(field, n)?.map_entries(|a| field.frobenius(a));
    let lhs = fbar.eval(field, n)?.mul(&incl(&f.source)?)?;
    let rhs = incl(&f.target)?.mul(&twisted)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_lifts_to_scaled_multiply() {
        for p in [2u32, 3] {
            let m = SymHom::multiply(&[1, 1]);
            let lift = twist_lift(&m, p).unwrap().expect("multiplication is twist compatible");
            let pu = p as usize;
            assert_eq!(lift, SymHom::multiply(&[pu, pu]));
        }
        let m = SymHom::multiply(&[2, 1]);
        assert_eq!(twist_lift(&m, 2).unwrap().unwrap(), SymHom::multiply(&[4, 2]));
    }

    #[test]
    fn swap_lifts_to_swap() {
        for p in [2u32, 3] {
            let tau = SymHom::permutation(&[1, 1], &[1, 0]);
            let pu = p as usize;
            assert_eq!(twist_lift(&tau, p).unwrap().unwrap(), SymHom::permutation(&[pu, pu], &[1, 0]));
        }
    }

    #[test]
    fn comultiply_rejected_at_two() {
        assert!(twist_lift(&SymHom::comultiply(&[1, 1]), 2).unwrap().is_none());
        assert_eq!(super::super::hom_basis(&[4], &[2, 2]).unwrap().len(), 1);
        assert!(twist_lift(&SymHom::comultiply(&[1, 1]), 3).unwrap().is_none());
    }

    #[test]
    fn identity_and_zero_lift() {
        let s = SymSum::new(vec![vec![1, 1], vec![2]]).unwrap();
        let id = twist_lift(&SymHom::identity(&s), 3).unwrap().unwrap();
        assert_eq!(id, SymHom::identity(&s.scaled(3)));
        let z = twist_lift(&SymHom::zero(s.clone(), s.clone()), 2).unwrap().unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn full_square_and_frobenius_for_lifts() {
        let field = Field::prime(2).unwrap();
        let one_minus_tau = SymHom::identity(&SymSum::tensor_power(2))
            .lin_comb(1, &SymHom::permutation(&[1, 1], &[1, 0]), -1)
            .unwrap();
        let fbar = twist_lift(&one_minus_tau, 2).unwrap().unwrap();
        for n in 1..=3 {
            assert!(check_lift_square(&one_minus_tau, &fbar, &field, n).unwrap());
            assert!(check_frobenius(&one_minus_tau, &fbar, &field, n).unwrap());
        }
        // a wrong candidate fails
        let wrong = SymHom::identity(&SymSum::single(vec![2, 2]));
        assert!(!check_lift_square(&one_minus_tau, &wrong, &field, 2).unwrap());
    }
}
