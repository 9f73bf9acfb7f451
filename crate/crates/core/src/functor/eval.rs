use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::combin::{distinct_permutations, monomial_index, monomials, subsets, Multiset};
use super::expr::FunctorExpr;
use crate::error::Result;
use crate::ffalg::{normalize, Basis, Elem, FFMatrix, FieldRef, SpVec};

fn monomial_label(m: &[u32]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    super::combin::counts(m)
        .into_iter()
        .map(|(v, c)| if c == 1 { format!("x{v}") } else { format!("x{v}^{c}") })
        .collect()
}

/// Basis of `F(k^n)`. Symmetric and divided powers are indexed by sorted
/// index tuples (lexicographic), exterior powers by increasing subsets,
/// tensor products lexicographically with the first factor major.
pub fn eval_space(f: &FunctorExpr, n: usize) -> Basis {
    static CACHE: OnceLock<Mutex<HashMap<(FunctorExpr, usize), Basis>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&(f.clone(), n)) {
        return b.clone();
    }
    let b = match f {
        FunctorExpr::Id | FunctorExpr::Twist(_) => Basis::generated(n, |i| format!("x{i}")),
        FunctorExpr::Sym(d) => {
            let mons = monomials(n, *d);
            Basis::generated(mons.len(), move |i| monomial_label(&mons[i]))
        }
        FunctorExpr::Gamma(d) => {
            let mons = monomials(n, *d);
            Basis::generated(mons.len(), move |i| format!("γ[{}]", monomial_label(&mons[i])))
        }
        FunctorExpr::Ext(d) => {
            let subs = subsets(n, *d);
            Basis::generated(subs.len(), move |i| {
                subs[i].iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join("∧")
            })
        }
        FunctorExpr::Tensor(v) => {
            let mut it = v.iter().map(|x| eval_space(x, n));
            match it.next() {
                None => Basis::indexed(1),
                Some(first) => it.fold(first, |acc, b| Basis::tensor(&acc, &b)),
            }
        }
        FunctorExpr::Sum(v) => Basis::sum(v.iter().map(|x| eval_space(x, n)).collect()),
        FunctorExpr::Compose(a, b) => eval_space(a, b.dim(n)),
        FunctorExpr::SumPower(k) => Basis::sum((0..*k).map(|_| eval_space(&FunctorExpr::Id, n)).collect()),
        FunctorExpr::Const(c) => Basis::indexed(*c),
    };
    cache.lock().unwrap().insert((f.clone(), n), b.clone());
    b
}

/// `F(f)` for a linear map `f : k^m -> k^r`.
pub fn eval_map(func: &FunctorExpr, f: &FFMatrix) -> Result<FFMatrix> {
    let field = f.field().clone();
    let (m, r) = (f.ncols(), f.nrows());
    let src = eval_space(func, m);
    let tgt = eval_space(func, r);
    let out = match func {
        FunctorExpr::Id => f.clone(),
        FunctorExpr::Twist(t) => f.map_entries(|a| field.frobenius_pow(a, *t)),
        FunctorExpr::Sym(d) => FFMatrix::from_columns(&field, tgt.clone(), src.clone(), sym_columns(&field, f, *d))?,
        FunctorExpr::Gamma(d) => FFMatrix::from_columns(&field, tgt.clone(), src.clone(), gamma_columns(&field, f, *d))?,
        FunctorExpr::Ext(d) => FFMatrix::from_columns(&field, tgt.clone(), src.clone(), ext_columns(&field, f, *d))?,
        FunctorExpr::Tensor(v) => {
            let mut acc = FFMatrix::identity(&field, Basis::indexed(1));
            for x in v {
                acc = acc.kron(&eval_map(x, f)?)?;
            }
            acc
        }
        FunctorExpr::Sum(v) => FFMatrix::direct_sum(&field, &v.iter().map(|x| eval_map(x, f)).collect::<Result<Vec<_>>>()?)?,
        FunctorExpr::Compose(a, b) => eval_map(a, &eval_map(b, f)?)?,
        FunctorExpr::SumPower(k) => FFMatrix::direct_sum(&field, &vec![f.clone(); *k])?,
        FunctorExpr::Const(c) => FFMatrix::identity(&field, Basis::indexed(*c)),
    };
    out.with_bases(tgt, src)
}

/// Columns of `S^d(f)`: products of the columns of `f`.
fn sym_columns(field: &FieldRef, f: &FFMatrix, d: usize) -> Vec<SpVec> {
    let (m, r) = (f.ncols(), f.nrows());
    let fcols = f.columns();
    let index = monomial_index(r, d);
    monomials(m, d)
        .iter()
        .map(|mono| {
            let mut poly: HashMap<Multiset, Elem> = HashMap::from([(Vec::new(), field.one())]);
            for &v in mono {
                let mut next: HashMap<Multiset, Elem> = HashMap::new();
                for (k, c) in &poly {
                    for &(i, a) in &fcols[v as usize] {
                        let pos = k.partition_point(|&x| x <= i);
                        let mut key = k.clone();
                        key.insert(pos, i);
                        let e = next.entry(key).or_insert(Elem::ZERO);
                        *e = field.add(*e, field.mul(*c, a));
                    }
                }
                poly = next;
            }
            normalize(field, poly.into_iter().map(|(k, c)| (index[&k], c)).collect())
        })
        .collect()
}

/// Columns of `Γ^d(f)` on orbit-sum bases: the coefficient of the orbit sum
/// of `N` in the image of the orbit sum of `M` is the sum over distinct
/// permutations `s` of `M` of `∏ f[N_k, s_k]`.
fn gamma_columns(field: &FieldRef, f: &FFMatrix, d: usize) -> Vec<SpVec> {
    let (m, r) = (f.ncols(), f.nrows());
    let fcols = f.columns();
    let index = monomial_index(r, d);
    monomials(m, d)
        .iter()
        .map(|mono| {
            let mut acc: HashMap<Multiset, Elem> = HashMap::new();
            for s in distinct_permutations(mono) {
                let mut partial: Vec<(Multiset, Elem)> = vec![(Vec::new(), field.one())];
                for &v in &s {
                    let mut next = Vec::new();
                    for (k, c) in &partial {
                        let lo = k.last().copied().unwrap_or(0);
                        for &(i, a) in &fcols[v as usize] {
                            if i >= lo {
                                let mut key = k.clone();
                                key.push(i);
                                next.push((key, field.mul(*c, a)));
                            }
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    let e = acc.entry(k).or_insert(Elem::ZERO);
                    *e = field.add(*e, c);
                }
            }
            normalize(field, acc.into_iter().map(|(k, c)| (index[&k], c)).collect())
        })
        .collect()
}

/// Columns of `Λ^d(f)`: wedge products of the columns of `f`.
fn ext_columns(field: &FieldRef, f: &FFMatrix, d: usize) -> Vec<SpVec> {
    let (m, r) = (f.ncols(), f.nrows());
    let fcols = f.columns();
    let index: HashMap<Vec<u32>, u32> = subsets(r, d).into_iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
    subsets(m, d)
        .iter()
        .map(|set| {
            let mut poly: HashMap<Vec<u32>, Elem> = HashMap::from([(Vec::new(), field.one())]);
            for &v in set {
                let mut next: HashMap<Vec<u32>, Elem> = HashMap::new();
                for (k, c) in &poly {
                    for &(i, a) in &fcols[v as usize] {
                        if k.contains(&i) {
                            continue;
                        }
                        let greater = k.iter().filter(|&&x| x > i).count();
                        let pos = k.partition_point(|&x| x < i);
                        let mut key = k.clone();
                        key.insert(pos, i);
                        let mut t = field.mul(*c, a);
                        if greater % 2 == 1 {
                            t = field.neg(t);
                        }
                        let e = next.entry(key).or_insert(Elem::ZERO);
                        *e = field.add(*e, t);
                    }
                }
                poly = next;
            }
            normalize(field, poly.into_iter().map(|(k, c)| (index[&k], c)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn sym2_of_diagonal() {
        let f = Field::prime(5).unwrap();
        let g = FFMatrix::from_int_rows(&f, &[vec![2, 0], vec![0, 3]]).unwrap();
        let s = eval_map(&FunctorExpr::Sym(2), &g).unwrap();
        // x0^2, x0x1, x1^2 scale by 4, 6, 9
        assert_eq!(s, FFMatrix::from_int_rows(&f, &[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 9]]).unwrap());
    }

    #[test]
    fn ext_top_power_is_determinant() {
        let f = Field::prime(7).unwrap();
        let g = FFMatrix::from_int_rows(&f, &[vec![1, 2, 0], vec![3, 4, 1], vec![0, 5, 6]]).unwrap();
        let det = eval_map(&FunctorExpr::Ext(3), &g).unwrap();
        // 1*(24-5) - 2*(18-0) + 0 = -17
        assert_eq!(det.get(0, 0), f.from_int(-17));
    }

    #[test]
    fn gamma_on_swap() {
        // Γ^2 of the swap: γ[x0^2] <-> γ[x1^2], γ[x0x1] fixed
        let f = Field::prime(2).unwrap();
        let sw = FFMatrix::from_int_rows(&f, &[vec![0, 1], vec![1, 0]]).unwrap();
        let g = eval_map(&FunctorExpr::Gamma(2), &sw).unwrap();
        assert_eq!(g, FFMatrix::from_int_rows(&f, &[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]).unwrap());
    }
}
