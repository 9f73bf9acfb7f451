use super::symhom::{key_position, SymSum};
use crate::error::{Error, Result};
use crate::ffalg::{FFMatrix, FieldRef};
use crate::functor::combin::{monomials, Multiset};
use crate::functor::{eval_space, FunctorExpr};

/// An iterated symmetric tensor `F` together with its canonical flat form
/// `F_0 = ⊕_i S^{λ^i}`, tensor products distributed over sums with the first
/// factor's summand index major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flattening {
    pub expr: FunctorExpr,
    pub sum: SymSum,
}

pub fn flatten(f: &FunctorExpr) -> Result<Flattening> {
    let parts = flat_parts(f)?;
    Ok(Flattening { expr: f.clone(), sum: SymSum::new(parts)? })
}

fn flat_parts(f: &FunctorExpr) -> Result<Vec<Vec<usize>>> {
    Ok(match f {
        FunctorExpr::Id => vec![vec![1]],
        FunctorExpr::Sym(0) => vec![vec![]],
        FunctorExpr::Sym(k) => vec![vec![*k]],
        FunctorExpr::Sum(v) => v.iter().map(flat_parts).collect::<Result<Vec<_>>>()?.concat(),
        FunctorExpr::Tensor(v) => {
            let mut acc = vec![Vec::new()];
            for x in v {
                let px = flat_parts(x)?;
                acc = acc
                    .iter()
                    .flat_map(|a| px.iter().map(move |b| [a.clone(), b.clone()].concat()))
                    .collect();
            }
            acc
        }
        _ => return Err(Error::Expr(format!("{f} is not an iterated symmetric tensor"))),
    })
}

/// For each basis index of `F(k^n)`: its summand of `F_0` and its key there.
fn layout(f: &FunctorExpr, n: usize) -> Vec<(usize, Vec<Multiset>)> {
    match f {
        FunctorExpr::Id => monomials(n, 1).iter().map(|m| (0, vec![m.clone()])).collect(),
        FunctorExpr::Sym(0) => vec![(0, Vec::new())],
        FunctorExpr::Sym(k) => monomials(n, *k).iter().map(|m| (0, vec![m.clone()])).collect(),
        FunctorExpr::Sum(v) => {
            let mut out = Vec::new();
            let mut off = 0;
            for x in v {
                out.extend(layout(x, n).into_iter().map(|(s, k)| (s + off, k)));
                off += flat_parts(x).map_or(0, |p| p.len());
            }
            out
        }
        FunctorExpr::Tensor(v) => {
            let mut acc: Vec<(usize, Vec<Multiset>)> = vec![(0, Vec::new())];
            for x in v {
                let count = flat_parts(x).map_or(0, |p| p.len());
                let lx = layout(x, n);
                acc = acc
                    .iter()
                    .flat_map(|(s, k)| lx.iter().map(move |(t, l)| (s * count + t, [k.clone(), l.clone()].concat())))
                    .collect();
            }
            acc
        }
        _ => Vec::new(),
    }
}

impl Flattening {
    /// The isomorphism `ξ_F : F(k^n) -> F_0(k^n)`.
    pub fn xi(&self, field: &FieldRef, n: usize) -> Result<FFMatrix> {
        let off = self.sum.offsets(n);
        let cols = layout(&self.expr, n)
            .into_iter()
            .map(|(s, key)| vec![((off[s] + key_position(&self.sum.parts[s], n, &key)) as u32, field.one())])
            .collect();
        FFMatrix::from_columns(
            field,
            eval_space(&self.sum.to_functor(), n),
            eval_space(&self.expr, n),
            cols,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;
    use FunctorExpr::*;

    #[test]
    fn distributes_first_factor_major() {
        let f = Tensor(vec![Sum(vec![Sym(1), Sym(2)]), Sum(vec![Sym(2), Sym(1)])]);
        let fl = flatten(&f).unwrap_err();
        // inhomogeneous
        assert!(matches!(fl, Error::Degree(_)));
        let f = Tensor(vec![Sum(vec![Sym(1), Id]), Sym(2)]);
        assert_eq!(flatten(&f).unwrap().sum.parts, vec![vec![1, 2], vec![1, 2]]);
        assert!(flatten(&Gamma(2)).is_err());
    }

    #[test]
    fn xi_is_a_permutation() {
        let field = Field::prime(3).unwrap();
        let f = Tensor(vec![Sum(vec![Sym(1), Id]), Sum(vec![Sym(1), Id])]);
        let fl = flatten(&f).unwrap();
        assert_eq!(fl.sum.len(), 4);
        for n in 1..=3 {
            let xi = fl.xi(&field, n).unwrap();
            assert_eq!(xi.rank(), xi.nrows());
            assert_eq!(xi.nrows(), xi.ncols());
            assert_eq!(xi.nnz(), xi.ncols());
        }
        // genuinely reorders once both sums have two summands
        let xi = fl.xi(&field, 2).unwrap();
        assert_ne!(xi, FFMatrix::identity(&field, xi.col_basis().clone()));
    }
}
