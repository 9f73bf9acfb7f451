use std::fmt;

use super::combin::{merge, monomial_index, monomials, splittings, Multiset};
use super::eval::eval_space;
use super::expr::FunctorExpr;
use super::sexpr::Sexp;
use crate::error::{Error, Result};
use crate::ffalg::{normalize, Basis, FFMatrix, FieldRef, SpVec};

/// A natural transformation given by a recipe in canonical bases.
/// Scalars are integers, read in the prime field at evaluation time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatMap {
    Identity(FunctorExpr),
    /// `S^{a_1} ⊗ ... ⊗ S^{a_k} -> S^{Σa}`.
    Multiply(Vec<usize>),
    /// `S^{Σa} -> S^{a_1} ⊗ ... ⊗ S^{a_k}`.
    Comultiply(Vec<usize>),
    /// `⊗_k F_k -> ⊗_k F_{σ(k)}`: output factor `k` is input factor `sigma[k]`.
    Permute { factors: Vec<FunctorExpr>, sigma: Vec<usize> },
    /// `⊗_i S^{λ_i} ∘ I^(1) -> ⊗_i S^{pλ_i}`, `x ↦ x^p`.
    FrobeniusIncl { lambda: Vec<usize>, p: u32 },
    /// `S^n ∘ S^p -> S^{np}`.
    PowerMult { n: usize, p: usize },
    /// `Γ^{Σπ} -> Γ^{π_1} ⊗ ... ⊗ Γ^{π_k}`.
    DiagonalGamma(Vec<usize>),
    /// Integer linear combination of maps with the same source and target.
    Linear(Vec<(i64, NatMap)>),
    Tensor(Vec<NatMap>),
    DirectSum(Vec<NatMap>),
    /// `Compose(outer, inner)` is `outer ∘ inner`.
    Compose(Box<NatMap>, Box<NatMap>),
    /// `u_G : F ∘ G -> F' ∘ G` for `u : F -> F'`.
    Whisker(Box<NatMap>, FunctorExpr),
    /// Map between direct sums given by blocks `(source i, target j, map)`.
    Matrix { sources: Vec<FunctorExpr>, targets: Vec<FunctorExpr>, blocks: Vec<(usize, usize, NatMap)> },
}

use FunctorExpr as F;

impl NatMap {
    pub fn multiply(i: usize, j: usize) -> NatMap {
        NatMap::Multiply(vec![i, j])
    }

    pub fn comultiply(i: usize, j: usize) -> NatMap {
        NatMap::Comultiply(vec![i, j])
    }

    pub fn compose(outer: NatMap, inner: NatMap) -> NatMap {
        NatMap::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn source(&self) -> Result<FunctorExpr> {
        Ok(match self {
            NatMap::Identity(f) => f.clone(),
            NatMap::Multiply(a) => F::sym_tensor(a),
            NatMap::Comultiply(a) => F::Sym(a.iter().sum()),
            NatMap::Permute { factors, .. } => F::Tensor(factors.clone()),
            NatMap::FrobeniusIncl { lambda, .. } => {
                F::Tensor(lambda.iter().map(|&l| F::compose(F::Sym(l), F::Twist(1))).collect())
            }
            NatMap::PowerMult { n, p } => F::compose(F::Sym(*n), F::Sym(*p)),
            NatMap::DiagonalGamma(pi) => F::Gamma(pi.iter().sum()),
            NatMap::Linear(v) => v.first().ok_or_else(|| Error::Expr("empty linear combination".into()))?.1.source()?,
            NatMap::Tensor(v) => F::Tensor(v.iter().map(|u| u.source()).collect::<Result<_>>()?),
            NatMap::DirectSum(v) => F::Sum(v.iter().map(|u| u.source()).collect::<Result<_>>()?),
            NatMap::Compose(_, b) => b.source()?,
            NatMap::Whisker(u, g) => F::compose(u.source()?, g.clone()),
            NatMap::Matrix { sources, .. } => F::Sum(sources.clone()),
        })
    }

    pub fn target(&self) -> Result<FunctorExpr> {
        Ok(match self {
            NatMap::Identity(f) => f.clone(),
            NatMap::Multiply(a) => F::Sym(a.iter().sum()),
            NatMap::Comultiply(a) => F::sym_tensor(a),
            NatMap::Permute { factors, sigma } => F::Tensor(sigma.iter().map(|&i| factors[i].clone()).collect()),
            NatMap::FrobeniusIncl { lambda, p } => F::Tensor(lambda.iter().map(|&l| F::Sym(l * *p as usize)).collect()),
            NatMap::PowerMult { n, p } => F::Sym(n * p),
            NatMap::DiagonalGamma(pi) => F::Tensor(pi.iter().map(|&k| F::Gamma(k)).collect()),
            NatMap::Linear(v) => v.first().ok_or_else(|| Error::Expr("empty linear combination".into()))?.1.target()?,
            NatMap::Tensor(v) => F::Tensor(v.iter().map(|u| u.target()).collect::<Result<_>>()?),
            NatMap::DirectSum(v) => F::Sum(v.iter().map(|u| u.target()).collect::<Result<_>>()?),
            NatMap::Compose(a, _) => a.target()?,
            NatMap::Whisker(u, g) => F::compose(u.target()?, g.clone()),
            NatMap::Matrix { targets, .. } => F::Sum(targets.clone()),
        })
    }

    /// Structural checks: composable shapes, equal degrees, valid permutations.
    pub fn validate(&self, p: u32) -> Result<()> {
        match self {
            NatMap::Permute { factors, sigma } => {
                let mut seen = vec![false; factors.len()];
                if sigma.len() != factors.len() || sigma.iter().any(|&i| i >= factors.len() || std::mem::replace(&mut seen[i], true)) {
                    return Err(Error::Expr(format!("{sigma:?} is not a permutation of {} factors", factors.len())));
                }
            }
            NatMap::FrobeniusIncl { p: q, .. } if *q != p => {
                return Err(Error::Expr(format!("Frobenius inclusion for p={q} used in characteristic {p}")));
            }
            NatMap::Linear(v) => {
                let (s, t) = (self.source()?, self.target()?);
                for (_, u) in v {
                    u.validate(p)?;
                    if !u.source()?.same_shape(&s) || !u.target()?.same_shape(&t) {
                        return Err(Error::Expr("linear combination of maps with different shapes".into()));
                    }
                }
            }
            NatMap::Tensor(v) | NatMap::DirectSum(v) => v.iter().try_for_each(|u| u.validate(p))?,
            NatMap::Compose(a, b) => {
                a.validate(p)?;
                b.validate(p)?;
                if !a.source()?.same_shape(&b.target()?) {
                    return Err(Error::Expr(format!("cannot compose {} after {}", a.source()?, b.target()?)));
                }
            }
            NatMap::Whisker(u, _) => u.validate(p)?,
            NatMap::Matrix { sources, targets, blocks } => {
                for (i, j, u) in blocks {
                    u.validate(p)?;
                    let (s, t) = (sources.get(*i), targets.get(*j));
                    match (s, t) {
                        (Some(s), Some(t)) if u.source()?.same_shape(s) && u.target()?.same_shape(t) => {}
                        _ => return Err(Error::Expr(format!("block ({i},{j}) does not fit"))),
                    }
                }
            }
            _ => {}
        }
        let (s, t) = (self.source()?, self.target()?);
        let (ds, dt) = (s.degree(p)?, t.degree(p)?);
        if ds != dt && !matches!(t.normalize(), F::Sum(ref v) if v.is_empty()) && !matches!(s.normalize(), F::Sum(ref v) if v.is_empty()) {
            return Err(Error::Degree(format!("{s} has degree {ds} but {t} has degree {dt}")));
        }
        Ok(())
    }

    /// Matrix of the transformation on `k^n`, from `eval_space(source, n)`
    /// to `eval_space(target, n)`.
    pub fn eval(&self, field: &FieldRef, n: usize) -> Result<FFMatrix> {
        let src = eval_space(&self.source()?, n);
        let tgt = eval_space(&self.target()?, n);
        let p = field.p();
        let cols: Vec<SpVec> = match self {
            NatMap::Identity(_) => return Ok(FFMatrix::identity(field, src)),
            NatMap::Multiply(a) => {
                let index = monomial_index(n, a.iter().sum());
                tuples(n, a)
                    .into_iter()
                    .map(|parts| {
                        let m = parts.iter().fold(Vec::new(), |acc, x| merge(&acc, x));
                        vec![(index[&m], field.one())]
                    })
                    .collect()
            }
            NatMap::Comultiply(a) => {
                let radix: Vec<usize> = a.iter().map(|&k| monomials(n, k).len()).collect();
                let idx: Vec<_> = a.iter().map(|&k| monomial_index(n, k)).collect();
                monomials(n, a.iter().sum())
                    .iter()
                    .map(|m| {
                        let v = splittings(m, a, p)
                            .into_iter()
                            .map(|(parts, c)| {
                                let pos = parts.iter().zip(&idx).zip(&radix).fold(0usize, |acc, ((x, ix), &r)| acc * r + ix[x] as usize);
                                (pos as u32, field.from_int(c as i64))
                            })
                            .collect();
                        normalize(field, v)
                    })
                    .collect()
            }
            NatMap::Permute { factors, sigma } => {
                let dims: Vec<usize> = factors.iter().map(|x| x.dim(n)).collect();
                let total: usize = dims.iter().product();
                (0..total)
                    .map(|mut c| {
                        let mut digits = vec![0usize; dims.len()];
                        for k in (0..dims.len()).rev() {
                            digits[k] = c % dims[k];
                            c /= dims[k];
                        }
                        let pos = sigma.iter().fold(0usize, |acc, &i| acc * dims[i] + digits[i]);
                        vec![(pos as u32, field.one())]
                    })
                    .collect()
            }
            NatMap::FrobeniusIncl { lambda, p } => {
                let p = *p as usize;
                let big: Vec<usize> = lambda.iter().map(|&l| l * p).collect();
                let radix: Vec<usize> = big.iter().map(|&k| monomials(n, k).len()).collect();
                let idx: Vec<_> = big.iter().map(|&k| monomial_index(n, k)).collect();
                tuples(n, lambda)
                    .into_iter()
                    .map(|parts| {
                        let pos = parts.iter().zip(&idx).zip(&radix).fold(0usize, |acc, ((x, ix), &r)| {
                            let pw: Multiset = x.iter().flat_map(|&v| std::iter::repeat(v).take(p)).collect();
                            acc * r + ix[&pw] as usize
                        });
                        vec![(pos as u32, field.one())]
                    })
                    .collect()
            }
            NatMap::PowerMult { n: k, p: q } => {
                let inner = monomials(n, *q);
                let index = monomial_index(n, k * q);
                monomials(inner.len(), *k)
                    .iter()
                    .map(|outer| {
                        let m = outer.iter().fold(Vec::new(), |acc, &i| merge(&acc, &inner[i as usize]));
                        vec![(index[&m], field.one())]
                    })
                    .collect()
            }
            NatMap::DiagonalGamma(pi) => {
                let radix: Vec<usize> = pi.iter().map(|&k| monomials(n, k).len()).collect();
                let idx: Vec<_> = pi.iter().map(|&k| monomial_index(n, k)).collect();
                monomials(n, pi.iter().sum())
                    .iter()
                    .map(|m| {
                        // every split appears once: the orbit of M is the disjoint
                        // union of products of orbits of the parts
                        let v = splittings(m, pi, u32::MAX.min(1 << 30))
                            .into_iter()
                            .map(|(parts, _)| {
                                let pos = parts.iter().zip(&idx).zip(&radix).fold(0usize, |acc, ((x, ix), &r)| acc * r + ix[x] as usize);
                                (pos as u32, field.one())
                            })
                            .collect();
                        normalize(field, v)
                    })
                    .collect()
            }
            NatMap::Linear(v) => {
                let mut acc = FFMatrix::zeros(field, tgt.clone(), src.clone());
                for (c, u) in v {
                    acc = acc.lin_comb(field.one(), &u.eval(field, n)?, field.from_int(*c))?;
                }
                return acc.with_bases(tgt, src);
            }
            NatMap::Tensor(v) => {
                let mut acc = FFMatrix::identity(field, Basis::indexed(1));
                for u in v {
                    acc = acc.kron(&u.eval(field, n)?)?;
                }
                return acc.with_bases(tgt, src);
            }
            NatMap::DirectSum(v) => {
                let blocks = v.iter().map(|u| u.eval(field, n)).collect::<Result<Vec<_>>>()?;
                return FFMatrix::direct_sum(field, &blocks)?.with_bases(tgt, src);
            }
            NatMap::Compose(a, b) => return a.eval(field, n)?.mul(&b.eval(field, n)?)?.with_bases(tgt, src),
            NatMap::Whisker(u, g) => return u.eval(field, g.dim(n))?.with_bases(tgt, src),
            NatMap::Matrix { sources, targets, blocks } => {
                let sb: Vec<Basis> = sources.iter().map(|x| eval_space(x, n)).collect();
                let tb: Vec<Basis> = targets.iter().map(|x| eval_space(x, n)).collect();
                let mut evaluated: Vec<(usize, usize, FFMatrix)> = Vec::new();
                for (i, j, u) in blocks {
                    let m = u.eval(field, n)?.with_bases(tb[*j].clone(), sb[*i].clone())?;
                    match evaluated.iter_mut().find(|(a, b, _)| a == j && b == i) {
                        Some(slot) => slot.2 = slot.2.add(&m)?,
                        None => evaluated.push((*j, *i, m)),
                    }
                }
                return FFMatrix::from_blocks(field, &tb, &sb, &evaluated)?.with_bases(tgt, src);
            }
        };
        FFMatrix::from_columns(field, tgt, src, cols)
    }

    pub fn to_sexp(&self) -> Sexp {
        let nums = |h: &str, v: &[usize]| Sexp::list(std::iter::once(Sexp::atom(h)).chain(v.iter().map(|x| Sexp::atom(x.to_string()))).collect());
        let list = |h: &str, v: Vec<Sexp>| Sexp::list(std::iter::once(Sexp::atom(h)).chain(v).collect());
        match self {
            NatMap::Identity(f) => list("identity", vec![f.to_sexp()]),
            NatMap::Multiply(a) => nums("mul", a),
            NatMap::Comultiply(a) => nums("comul", a),
            NatMap::Permute { factors, sigma } => list(
                "perm",
                vec![
                    Sexp::list(factors.iter().map(|f| f.to_sexp()).collect()),
                    Sexp::list(sigma.iter().map(|i| Sexp::atom(i.to_string())).collect()),
                ],
            ),
            NatMap::FrobeniusIncl { lambda, p } => list(
                "frob",
                vec![Sexp::atom(p.to_string()), Sexp::list(lambda.iter().map(|i| Sexp::atom(i.to_string())).collect())],
            ),
            NatMap::PowerMult { n, p } => nums("powmult", &[*n, *p]),
            NatMap::DiagonalGamma(pi) => nums("diag", pi),
            NatMap::Linear(v) => list(
                "lin",
                v.iter().map(|(c, u)| Sexp::list(vec![Sexp::atom(c.to_string()), u.to_sexp()])).collect(),
            ),
            NatMap::Tensor(v) => list("tensor", v.iter().map(|u| u.to_sexp()).collect()),
            NatMap::DirectSum(v) => list("dsum", v.iter().map(|u| u.to_sexp()).collect()),
            NatMap::Compose(a, b) => list("comp", vec![a.to_sexp(), b.to_sexp()]),
            NatMap::Whisker(u, g) => list("whisker", vec![u.to_sexp(), g.to_sexp()]),
            NatMap::Matrix { sources, targets, blocks } => list(
                "matrix",
                vec![
                    Sexp::list(sources.iter().map(|f| f.to_sexp()).collect()),
                    Sexp::list(targets.iter().map(|f| f.to_sexp()).collect()),
                    Sexp::list(
                        blocks
                            .iter()
                            .map(|(i, j, u)| Sexp::list(vec![Sexp::atom(i.to_string()), Sexp::atom(j.to_string()), u.to_sexp()]))
                            .collect(),
                    ),
                ],
            ),
        }
    }

    pub fn from_sexp(s: &Sexp) -> Result<NatMap> {
        let (h, args) = s.head().ok_or_else(|| Error::Expr(format!("not a map expression: {s}")))?;
        let ints = |v: &[Sexp]| v.iter().map(|x| x.as_usize()).collect::<Result<Vec<_>>>();
        let items = |x: &Sexp| match x {
            Sexp::List(v) => Ok(v.clone()),
            _ => Err(Error::Expr(format!("expected a list, got {x}"))),
        };
        let bad = || Error::Expr(format!("malformed {h}"));
        Ok(match h {
            "identity" => NatMap::Identity(FunctorExpr::from_sexp(args.first().ok_or_else(bad)?)?),
            "mul" => NatMap::Multiply(ints(args)?),
            "comul" => NatMap::Comultiply(ints(args)?),
            "perm" => match args {
                [f, s] => NatMap::Permute {
                    factors: items(f)?.iter().map(FunctorExpr::from_sexp).collect::<Result<_>>()?,
                    sigma: ints(&items(s)?)?,
                },
                _ => return Err(bad()),
            },
            "frob" => match args {
                [p, l] => NatMap::FrobeniusIncl { p: p.as_usize()? as u32, lambda: ints(&items(l)?)? },
                _ => return Err(bad()),
            },
            "powmult" => match ints(args)?.as_slice() {
                [n, p] => NatMap::PowerMult { n: *n, p: *p },
                _ => return Err(bad()),
            },
            "diag" => NatMap::DiagonalGamma(ints(args)?),
            "lin" => NatMap::Linear(
                args.iter()
                    .map(|t| match t {
                        Sexp::List(v) if v.len() == 2 => Ok((v[0].as_i64()?, NatMap::from_sexp(&v[1])?)),
                        _ => Err(bad()),
                    })
                    .collect::<Result<_>>()?,
            ),
            "tensor" => NatMap::Tensor(args.iter().map(NatMap::from_sexp).collect::<Result<_>>()?),
            "dsum" => NatMap::DirectSum(args.iter().map(NatMap::from_sexp).collect::<Result<_>>()?),
            "comp" => match args {
                [a, b] => NatMap::compose(NatMap::from_sexp(a)?, NatMap::from_sexp(b)?),
                _ => return Err(bad()),
            },
            "whisker" => match args {
                [u, g] => NatMap::Whisker(Box::new(NatMap::from_sexp(u)?), FunctorExpr::from_sexp(g)?),
                _ => return Err(bad()),
            },
            "matrix" => match args {
                [s, t, b] => NatMap::Matrix {
                    sources: items(s)?.iter().map(FunctorExpr::from_sexp).collect::<Result<_>>()?,
                    targets: items(t)?.iter().map(FunctorExpr::from_sexp).collect::<Result<_>>()?,
                    blocks: items(b)?
                        .iter()
                        .map(|x| match x {
                            Sexp::List(v) if v.len() == 3 => Ok((v[0].as_usize()?, v[1].as_usize()?, NatMap::from_sexp(&v[2])?)),
                            _ => Err(bad()),
                        })
                        .collect::<Result<_>>()?,
                },
                _ => return Err(bad()),
            },
            other => return Err(Error::Expr(format!("unknown map {other}"))),
        })
    }

    pub fn parse(src: &str) -> Result<NatMap> {
        Self::from_sexp(&Sexp::parse(src)?)
    }
}

impl fmt::Display for NatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

/// Basis tuples of `S^{a_1} ⊗ ... ⊗ S^{a_k}(k^n)` in evaluation order.
pub(crate) fn tuples(n: usize, a: &[usize]) -> Vec<Vec<Multiset>> {
    let mut out: Vec<Vec<Multiset>> = vec![Vec::new()];
    for &k in a {
        let mons = monomials(n, k);
        out = out
            .into_iter()
            .flat_map(|t| {
                mons.iter().map(move |m| {
                    let mut t = t.clone();
                    t.push(m.clone());
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn comultiply_s2_at_p2() {
        // x0^2 -> 2 x0⊗x0 = 0, x0x1 -> x0⊗x1 + x1⊗x0
        let f = Field::prime(2).unwrap();
        let m = NatMap::comultiply(1, 1).eval(&f, 2).unwrap();
        assert_eq!(m.column(0), vec![]);
        assert_eq!(m.column(1).len(), 2);
    }

    #[test]
    fn diagonal_gamma_example() {
        let f = Field::prime(3).unwrap();
        let m = NatMap::DiagonalGamma(vec![1, 1]).eval(&f, 2).unwrap();
        // γ[x0x1] -> x0⊗x1 + x1⊗x0 at positions 1 and 2 of ⊗^2
        assert_eq!(m.column(1), vec![(1, f.one()), (2, f.one())]);
        assert_eq!(m.column(0), vec![(0, f.one())]);
    }

    #[test]
    fn sexp_roundtrip() {
        let src = "(comp (mul 1 1) (lin (1 (identity (tensor id id))) (-1 (perm (id id) (1 0)))))";
        let u = NatMap::parse(src).unwrap();
        assert_eq!(u.to_string(), src);
        u.validate(2).unwrap();
    }

    #[test]
    fn bad_permutation_rejected() {
        let u = NatMap::Permute { factors: vec![F::Id, F::Id], sigma: vec![0, 0] };
        assert!(u.validate(2).is_err());
    }
}
