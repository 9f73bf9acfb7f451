//! Seeded samplers for functor expressions and structural natural maps.
use rand::seq::SliceRandom;
use rand::Rng;

use super::{FunctorExpr, NatMap};

/// A random homogeneous expression of degree `deg`; `Twist(1)` only
/// appears when `deg` is divisible by `p`.
pub fn random_expr(rng: &mut impl Rng, deg: usize, p: u32, depth: usize) -> FunctorExpr {
    use FunctorExpr::*;
    if deg == 0 {
        return Const(rng.gen_range(1..=2));
    }
    let mut leaves = vec![Sym(deg), Gamma(deg), Ext(deg)];
    if deg == 1 {
        leaves.extend([Id, SumPower(2)]);
    }
    if deg == p as usize {
        leaves.push(Twist(1));
    }
    if depth == 0 || rng.gen_bool(0.4) {
        return leaves.choose(rng).expect("nonempty").clone();
    }
    match rng.gen_range(0..3) {
        0 if deg >= 2 => {
            let a = rng.gen_range(1..deg);
            Tensor(vec![random_expr(rng, a, p, depth - 1), random_expr(rng, deg - a, p, depth - 1)])
        }
        1 => Sum(vec![random_expr(rng, deg, p, depth - 1), random_expr(rng, deg, p, depth - 1)]),
        _ => {
            let divisors: Vec<usize> = (1..=deg).filter(|a| deg % a == 0).collect();
            let a = *divisors.choose(rng).expect("nonempty");
            FunctorExpr::compose(random_expr(rng, a, p, depth - 1), random_expr(rng, deg / a, p, depth - 1))
        }
    }
}

fn composition(rng: &mut impl Rng, total: usize, parts: usize) -> Vec<usize> {
    let mut out = vec![1; parts];
    for _ in parts..total {
        out[rng.gen_range(0..parts)] += 1;
    }
    out
}

/// A random structural natural map of degree at most `max_deg`.
pub fn random_natmap(rng: &mut impl Rng, p: u32, max_deg: usize, depth: usize) -> NatMap {
    let total = rng.gen_range(2..=max_deg.max(2));
    let parts = rng.gen_range(1..=total.min(3));
    let a = composition(rng, total, parts);
    let leaf = match rng.gen_range(0..7) {
        0 => NatMap::Multiply(a),
        1 => NatMap::Comultiply(a),
        2 => NatMap::DiagonalGamma(a),
        3 => {
            let mut sigma: Vec<usize> = (0..a.len()).collect();
            sigma.shuffle(rng);
            NatMap::Permute { factors: a.iter().map(|&k| FunctorExpr::Sym(k)).collect(), sigma }
        }
        4 => NatMap::FrobeniusIncl { lambda: vec![1; rng.gen_range(1..=2)], p },
        5 => NatMap::PowerMult { n: 1 + rng.gen_range(0..2), p: 2 },
        _ => NatMap::compose(NatMap::Multiply(a.clone()), NatMap::Comultiply(a)),
    };
    if depth == 0 || rng.gen_bool(0.5) {
        return leaf;
    }
    match rng.gen_range(0..3) {
        0 => NatMap::Tensor(vec![leaf, NatMap::Identity(FunctorExpr::Id)]),
        1 => NatMap::Linear(vec![(rng.gen_range(-2..=2), leaf.clone()), (1, leaf)]),
        _ => NatMap::DirectSum(vec![leaf, random_natmap(rng, p, max_deg, depth - 1)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn samples_are_homogeneous_and_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let deg = rng.gen_range(0..=3);
            let e = random_expr(&mut rng, deg, 2, 2);
            assert_eq!(e.degree(2).unwrap(), if deg == 0 { 0 } else { deg }, "{e}");
            let u = random_natmap(&mut rng, 2, 3, 1);
            let is_sum = matches!(u, NatMap::DirectSum(_));
            if !is_sum {
                u.validate(2).unwrap();
            }
        }
    }
}
