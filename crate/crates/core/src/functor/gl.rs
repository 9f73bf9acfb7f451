use std::fmt;

use super::eval::{eval_map, eval_space};
use super::expr::FunctorExpr;
use crate::error::{Error, Result};
use crate::ffalg::{Basis, FFMatrix};

/// The bifunctor `F(gl)`, i.e. `(U, V) ↦ F(Hom(U, V))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BifunctorExpr {
    pub inner: FunctorExpr,
}

impl BifunctorExpr {
    pub fn new(inner: FunctorExpr) -> Self {
        BifunctorExpr { inner }
    }

    pub fn gl() -> Self {
        Self::new(FunctorExpr::Id)
    }

    pub fn bidegree(&self, p: u32) -> Result<(usize, usize)> {
        let d = self.inner.degree(p)?;
        Ok((d, d))
    }

    pub fn space(&self, n: usize) -> Basis {
        eval_space(&self.inner, n * n)
    }
}

impl fmt::Display for BifunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(gl)", self.inner)
    }
}

/// Basis of `gl_n`: matrix units `E_ab` at index `a*n + b`.
pub fn gl_basis(n: usize) -> Basis {
    Basis::generated(n * n, move |i| format!("E{}{}", i / n, i % n))
}

/// Conjugation `X ↦ g X g⁻¹` on `gl_n` given `g` and its inverse.
pub fn adjoint(g: &FFMatrix, ginv: &FFMatrix) -> Result<FFMatrix> {
    let n = g.nrows();
    let field = g.field().clone();
    let gcols = g.columns();
    let irows = ginv.rows_sparse();
    let cols = (0..n * n)
        .map(|ab| {
            let (a, b) = (ab / n, ab % n);
            let mut v = Vec::new();
            for &(c, x) in &gcols[a] {
                for &(d, y) in &irows[b] {
                    v.push((c * n as u32 + d, field.mul(x, y)));
                }
            }
            v.sort_unstable_by_key(|t| t.0);
            v
        })
        .collect();
    FFMatrix::from_columns(&field, gl_basis(n), gl_basis(n), cols)
}

/// Action of `g ∈ GL_n` on `B(k^n, k^n)`, through `B(g⁻¹, g)`.
pub fn gl_eval(b: &BifunctorExpr, g: &FFMatrix) -> Result<FFMatrix> {
    if g.nrows() != g.ncols() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", g.nrows(), g.ncols())));
    }
    let ginv = g.inverse()?;
    eval_map(&b.inner, &adjoint(g, &ginv)?)
}

/// Same as [`gl_eval`] with a known inverse, used for generator families.
pub fn gl_eval_with_inverse(b: &BifunctorExpr, g: &FFMatrix, ginv: &FFMatrix) -> Result<FFMatrix> {
    eval_map(&b.inner, &adjoint(g, ginv)?)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    #[test]
    fn scalars_act_trivially() {
        let f = Field::prime(5).unwrap();
        let g = FFMatrix::from_int_rows(&f, &[vec![3, 0], vec![0, 3]]).unwrap();
        let a = gl_eval(&BifunctorExpr::gl(), &g).unwrap();
        assert_eq!(a, FFMatrix::identity(&f, gl_basis(2)));
    }

    #[test]
    fn permutations_permute_units() {
        let f = Field::prime(3).unwrap();
        let g = FFMatrix::from_int_rows(&f, &[vec![0, 1], vec![1, 0]]).unwrap();
        let a = gl_eval(&BifunctorExpr::gl(), &g).unwrap();
        // E_01 -> E_10
        assert_eq!(a.column(1), vec![(2, f.one())]);
        assert_eq!(a.column(0), vec![(3, f.one())]);
    }

    #[test]
    fn singular_rejected() {
        let f = Field::prime(2).unwrap();
        let g = FFMatrix::from_int_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(gl_eval(&BifunctorExpr::gl(), &g).is_err());
    }
}
