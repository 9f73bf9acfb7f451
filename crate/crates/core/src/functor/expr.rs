use std::fmt;

use super::combin::{binomial, multiset_count};
use super::sexpr::Sexp;
use crate::error::{Error, Result};

/// Expression for a strict polynomial functor built from the identity,
/// symmetric, divided and exterior powers, Frobenius twists, constants,
/// tensor products, direct sums and composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctorExpr {
    Id,
    Sym(usize),
    Gamma(usize),
    Ext(usize),
    Tensor(Vec<FunctorExpr>),
    Sum(Vec<FunctorExpr>),
    /// `Compose(outer, inner)` is `outer ∘ inner`.
    Compose(Box<FunctorExpr>, Box<FunctorExpr>),
    /// `I^(r)`, the r-th Frobenius twist of the identity.
    Twist(u32),
    /// `V ↦ V^{⊕k}`.
    SumPower(usize),
    /// The constant functor `k^c`.
    Const(usize),
}

use FunctorExpr::*;

impl FunctorExpr {
    pub fn compose(outer: FunctorExpr, inner: FunctorExpr) -> FunctorExpr {
        Compose(Box::new(outer), Box::new(inner))
    }

    /// `S^{λ_1} ⊗ ... ⊗ S^{λ_k}`.
    pub fn sym_tensor(lambda: &[usize]) -> FunctorExpr {
        Tensor(lambda.iter().map(|&l| Sym(l)).collect())
    }

    /// `⊗^d`.
    pub fn tensor_power(d: usize) -> FunctorExpr {
        Tensor(vec![Id; d])
    }

    /// Polynomial degree; twists contribute `p^r`. Fails on inhomogeneous sums.
    pub fn degree(&self, p: u32) -> Result<usize> {
        Ok(match self {
            Id | SumPower(_) => 1,
            Sym(d) | Gamma(d) | Ext(d) => *d,
            Tensor(v) => v.iter().map(|x| x.degree(p)).sum::<Result<usize>>()?,
            Sum(v) => {
                let mut deg = None;
                for x in v {
                    let dx = x.degree(p)?;
                    match deg {
                        None => deg = Some(dx),
                        Some(d) if d != dx => {
                            return Err(Error::Expr(format!("inhomogeneous sum: degrees {d} and {dx} in {self}")))
                        }
                        _ => {}
                    }
                }
                deg.unwrap_or(0)
            }
            Compose(a, b) => a.degree(p)? * b.degree(p)?,
            Twist(r) => (p as usize).pow(*r),
            Const(_) => 0,
        })
    }

    /// Dimension of the value on an `n`-dimensional space.
    pub fn dim(&self, n: usize) -> usize {
        match self {
            Id | Twist(_) => n,
            Sym(d) | Gamma(d) => multiset_count(n, *d),
            Ext(d) => binomial(n as u64, *d as u64) as usize,
            Tensor(v) => v.iter().map(|x| x.dim(n)).product(),
            Sum(v) => v.iter().map(|x| x.dim(n)).sum(),
            Compose(a, b) => a.dim(b.dim(n)),
            SumPower(k) => k * n,
            Const(c) => *c,
        }
    }

    /// Flattens nested tensors and sums, unwraps singletons and identifies
    /// functors that evaluate to the same based spaces (`S^1 = Γ^1 = Λ^1 =
    /// I`, degree-zero powers and empty tensors are `k`).
    pub fn normalize(&self) -> FunctorExpr {
        match self {
            Sym(1) | Gamma(1) | Ext(1) | SumPower(1) | Twist(0) => Id,
            Sym(0) | Gamma(0) | Ext(0) => Const(1),
            Tensor(v) => {
                let mut out = Vec::new();
                for x in v {
                    match x.normalize() {
                        Tensor(inner) => out.extend(inner),
                        Const(1) => {}
                        y => out.push(y),
                    }
                }
                match out.len() {
                    0 => Const(1),
                    1 => out.pop().unwrap(),
                    _ => Tensor(out),
                }
            }
            Sum(v) => {
                let mut out = Vec::new();
                for x in v {
                    match x.normalize() {
                        Sum(inner) => out.extend(inner),
                        y => out.push(y),
                    }
                }
                if out.len() == 1 {
                    out.pop().unwrap()
                } else {
                    Sum(out)
                }
            }
            Compose(a, b) => match (a.normalize(), b.normalize()) {
                (Id, y) => y,
                (x, Id) => x,
                (x, y) => Compose(Box::new(x), Box::new(y)),
            },
            x => x.clone(),
        }
    }

    /// Whether two expressions evaluate to the same based spaces.
    pub fn same_shape(&self, other: &FunctorExpr) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn to_sexp(&self) -> Sexp {
        let num = |h: &str, n: usize| Sexp::list(vec![Sexp::atom(h), Sexp::atom(n.to_string())]);
        match self {
            Id => Sexp::atom("id"),
            Sym(d) => num("sym", *d),
            Gamma(d) => num("gamma", *d),
            Ext(d) => num("ext", *d),
            Twist(r) => num("twist", *r as usize),
            SumPower(k) => num("sumpow", *k),
            Const(c) => num("const", *c),
            Tensor(v) => Sexp::list(std::iter::once(Sexp::atom("tensor")).chain(v.iter().map(|x| x.to_sexp())).collect()),
            Sum(v) => Sexp::list(std::iter::once(Sexp::atom("sum")).chain(v.iter().map(|x| x.to_sexp())).collect()),
            Compose(a, b) => Sexp::list(vec![Sexp::atom("compose"), a.to_sexp(), b.to_sexp()]),
        }
    }

    pub fn from_sexp(s: &Sexp) -> Result<FunctorExpr> {
        if s.as_atom() == Some("id") {
            return Ok(Id);
        }
        let (h, args) = s.head().ok_or_else(|| Error::Expr(format!("not a functor expression: {s}")))?;
        let one = || -> Result<usize> {
            match args {
                [x] => x.as_usize(),
                _ => Err(Error::Expr(format!("{h} takes one integer argument"))),
            }
        };
        Ok(match h {
            "sym" => Sym(one()?),
            "gamma" => Gamma(one()?),
            "ext" => Ext(one()?),
            "twist" => Twist(one()? as u32),
            "sumpow" => SumPower(one()?),
            "const" => Const(one()?),
            "tensor" => Tensor(args.iter().map(Self::from_sexp).collect::<Result<_>>()?),
            "sum" => Sum(args.iter().map(Self::from_sexp).collect::<Result<_>>()?),
            "compose" => match args {
                [a, b] => Compose(Box::new(Self::from_sexp(a)?), Box::new(Self::from_sexp(b)?)),
                _ => return Err(Error::Expr("compose takes two arguments".into())),
            },
            other => return Err(Error::Expr(format!("unknown functor {other}"))),
        })
    }

    pub fn parse(src: &str) -> Result<FunctorExpr> {
        Self::from_sexp(&Sexp::parse(src)?)
    }
}

impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let e = FunctorExpr::parse("(tensor (sym 2) (compose (sym 1) (twist 1)))").unwrap();
        assert_eq!(e.degree(3).unwrap(), 5);
        let bad = FunctorExpr::parse("(sum (sym 2) (sym 3))").unwrap();
        assert!(matches!(bad.degree(2), Err(Error::Expr(_))));
    }

    #[test]
    fn dims_are_binomials() {
        assert_eq!(Sym(2).dim(3), 6);
        assert_eq!(Ext(2).dim(4), 6);
        assert_eq!(FunctorExpr::compose(Sym(2), SumPower(2)).dim(2), 10);
    }

    #[test]
    fn normalization_flattens() {
        let a = Tensor(vec![Tensor(vec![Sym(1), Sym(2)]), Sym(0), Sym(3)]);
        assert_eq!(a.normalize(), Tensor(vec![Id, Sym(2), Sym(3)]));
    }
}
