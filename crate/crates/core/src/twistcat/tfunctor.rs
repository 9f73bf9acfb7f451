use super::flatten::{flatten, Flattening};
use super::lift::twist_lift;
use super::symhom::{SymHom, SymSum};
use crate::error::{Error, Result};
use crate::ffalg::FieldRef;
use crate::functor::FunctorExpr;
use crate::pcomplex::NMap;
use crate::troesch::{troesch_tensor, KeyedNComplex, TKey};

/// `T(F) = ⊕_i B_{pλ^i}` for the flat form `⊕_i S^{λ^i}` of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TObject {
    pub flat: Flattening,
    pub p: usize,
}

#[allow(non_snake_case)]
pub fn T_object(f: &FunctorExpr, p: usize) -> Result<TObject> {
    Ok(TObject { flat: flatten(f)?, p })
}

pub fn t_of_sum(sum: &SymSum, field: &FieldRef, m: usize) -> Result<KeyedNComplex> {
    let p = field.p() as usize;
    let parts = sum
        .parts
        .iter()
        .map(|l| troesch_tensor(&l.iter().map(|x| x * p).collect::<Vec<_>>(), field, m))
        .collect::<Result<Vec<_>>>()?;
    KeyedNComplex::direct_sum(field, p, &parts)
}

impl TObject {
    pub fn evaluate(&self, field: &FieldRef, m: usize) -> Result<KeyedNComplex> {
        if field.p() as usize != self.p {
            return Err(Error::OrderMismatch { order: self.p, p: field.p() });
        }
        t_of_sum(&self.flat.sum, field, m)
    }
}

/// `T(f) = f̄(I^{⊕p})` for a twist compatible `f` between flat sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TMap {
    pub f: SymHom,
    pub lift: SymHom,
    pub p: usize,
}

#[allow(non_snake_case)]
pub fn T_map(f: &SymHom, p: usize) -> Result<TMap> {
    match twist_lift(f, p as u32)? {
        Some(lift) => Ok(TMap { f: f.clone(), lift, p }),
        None => Err(Error::NotTwistCompatible(f.to_string())),
    }
}

/// Applies a lifted map to a key of `T(source)`; slots ride along since
/// the map only regroups letters.
pub fn apply_lift(lift: &SymHom, key: &TKey, p: u32) -> Vec<(TKey, i64)> {
    lift.apply_key(key.block as usize, &key.parts, p)
        .into_iter()
        .map(|((j, parts), c)| (TKey::new(j as u32, parts), c as i64))
        .collect()
}

impl TMap {
    pub fn evaluate_between(&self, source: &KeyedNComplex, target: &KeyedNComplex) -> Result<NMap> {
        let p = self.p as u32;
        let len = source.complex.len().max(target.complex.len());
        let maps = (0..len)
            .map(|t| source.key_map(target, t, |k| apply_lift(&self.lift, k, p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(NMap { source: source.complex.clone(), target: target.complex.clone(), maps })
    }

    pub fn evaluate(&self, field: &FieldRef, m: usize) -> Result<NMap> {
        let source = t_of_sum(&self.f.source, field, m)?;
        let target = t_of_sum(&self.f.target, field, m)?;
        self.evaluate_between(&source, &target)
    }
}

/// The isomorphism `T(F) ⊗ T(G) -> T(F ⊗ G)` at `k^m`: both sides carry the
/// same keys, in different orders.
#[allow(non_snake_case)]
pub fn T_monoidal(f: &FunctorExpr, g: &FunctorExpr, field: &FieldRef, m: usize) -> Result<NMap> {
    let p = field.p() as usize;
    let tf = T_object(f, p)?.evaluate(field, m)?;
    let tg = T_object(g, p)?.evaluate(field, m)?;
    let source = tf.tensor_p(&tg)?;
    let target = T_object(&FunctorExpr::Tensor(vec![f.clone(), g.clone()]), p)?.evaluate(field, m)?;
    let len = source.complex.len().max(target.complex.len());
    let maps = (0..len)
        .map(|t| source.key_map(&target, t, |k| vec![(k.clone(), 1)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(NMap { source: source.complex, target: target.complex, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;
    use crate::troesch::build_troesch;

    #[test]
    fn t_of_s1_is_bp() {
        for p in [2u32, 3] {
            let f = Field::prime(p).unwrap();
            let t = T_object(&FunctorExpr::Sym(1), p as usize).unwrap().evaluate(&f, 2).unwrap();
            let b = build_troesch(p as usize, p as usize).evaluate_keyed(&f, 2).unwrap();
            assert_eq!(t.complex.dims(), b.complex.dims());
            assert_eq!(t.keys, b.keys);
        }
    }

    #[test]
    fn additivity_and_tensor_power() {
        let f = Field::prime(2).unwrap();
        let bp = T_object(&FunctorExpr::Id, 2).unwrap().evaluate(&f, 2).unwrap();
        let sum = T_object(&FunctorExpr::Sum(vec![FunctorExpr::Sym(1), FunctorExpr::Sym(1)]), 2).unwrap().evaluate(&f, 2).unwrap();
        assert_eq!(sum.complex.dims(), bp.complex.dims().iter().map(|d| 2 * d).collect::<Vec<_>>());
        let sq = T_object(&FunctorExpr::tensor_power(2), 2).unwrap().evaluate(&f, 2).unwrap();
        let direct = bp.tensor_p(&bp).unwrap();
        assert_eq!(sq.keys, direct.keys);
        for t in 0..sq.complex.len() - 1 {
            assert_eq!(sq.complex.d(t), direct.complex.d(t));
        }
    }

    #[test]
    fn identity_and_one_minus_tau() {
        let f = Field::prime(2).unwrap();
        let s = SymSum::tensor_power(2);
        let id = T_map(&SymHom::identity(&s), 2).unwrap().evaluate(&f, 2).unwrap();
        assert!(id.is_chain_map().unwrap());
        for (k, m) in id.maps.iter().enumerate() {
            assert_eq!(*m, crate::ffalg::FFMatrix::identity(&f, id.source.object(k)));
        }
        let tau = SymHom::permutation(&[1, 1], &[1, 0]);
        let one_minus_tau = SymHom::identity(&s).lin_comb(1, &tau, -1).unwrap();
        for m in 1..=3 {
            let t = T_map(&one_minus_tau, 2).unwrap().evaluate(&f, m).unwrap();
            assert!(t.is_chain_map().unwrap());
            // degree 0 is f̄ itself on S^2⊗S^2
            let lift = twist_lift(&one_minus_tau, 2).unwrap().unwrap();
            assert_eq!(t.maps[0], lift.eval(&f, m).unwrap());
        }
    }

    #[test]
    fn permutation_is_factor_swap() {
        let f = Field::prime(3).unwrap();
        let tau = SymHom::permutation(&[1, 1], &[1, 0]);
        let t = T_map(&tau, 3).unwrap().evaluate(&f, 1).unwrap();
        assert!(t.is_chain_map().unwrap());
        let bp = build_troesch(3, 3).evaluate_keyed(&f, 1).unwrap();
        let sq = bp.tensor_p(&bp).unwrap();
        for (deg, ks) in sq.keys.iter().enumerate() {
            let idx = sq.index(deg);
            for (i, k) in ks.iter().enumerate() {
                let swapped = TKey::new(0, vec![k.parts[1].clone(), k.parts[0].clone()]);
                assert_eq!(t.maps[deg].column(i), vec![(idx[&swapped] as u32, f.one())]);
            }
        }
    }

    #[test]
    fn comultiply_has_no_t_map() {
        assert!(matches!(T_map(&SymHom::comultiply(&[1, 1]), 2), Err(Error::NotTwistCompatible(_))));
    }

    #[test]
    fn monoidal_iso_is_chain_map() {
        for p in [2u32, 3] {
            let f = Field::prime(p).unwrap();
            for m in 1..=2 {
                let iso = T_monoidal(&FunctorExpr::Sym(1), &FunctorExpr::Sym(1), &f, m).unwrap();
                assert!(iso.is_chain_map().unwrap());
                assert_eq!(iso.maps[0], crate::ffalg::FFMatrix::identity(&f, iso.source.object(0)));
                for k in 0..iso.maps.len() {
                    assert_eq!(iso.maps[k].rank(), iso.source.dim(k));
                }
            }
        }
    }
}
