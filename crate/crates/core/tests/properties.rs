use glcoh::bar::shuffle;
use glcoh::ffalg::codec::{matrix_from_bytes, matrix_to_bytes};
use glcoh::ffalg::{Basis, FFMatrix, Field};
use glcoh::functor::sample::random_expr;
use glcoh::functor::{eval_map, eval_space, FunctorExpr};
use glcoh::pcomplex::random::{random_complex, random_matrix, random_ncomplex};
use glcoh::pcomplex::{contract, eta, tensor_p, tilde};
use glcoh::suites::estimate;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field_order() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(q in field_order(), a in 0u32..32, b in 0u32..32, c in 0u32..32) {
        let f = Field::of_order(q).unwrap();
        let (a, b, c) = (f.elem(a % q).unwrap(), f.elem(b % q).unwrap(), f.elem(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn rank_nullity_and_codec(q in field_order(), r in 1usize..8, c in 1usize..8, seed in any::<u64>()) {
        let f = Field::of_order(q).unwrap();
        let m = random_matrix(&f, &mut ChaCha8Rng::seed_from_u64(seed), r, c);
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.len(), c);
        prop_assert!(k.iter().all(|v| m.apply(v).is_empty()));
        prop_assert_eq!(matrix_from_bytes(&matrix_to_bytes(&m)).unwrap(), m);
    }

    #[test]
    fn tensor_keeps_nilpotence(p in prop::sample::select(vec![2u32, 3, 5]), seed in any::<u64>()) {
        let f = Field::prime(p).unwrap();
        let n = p as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_ncomplex(&f, &mut rng, n, 3 * n, 4);
        let d = random_ncomplex(&f, &mut rng, n, 3 * n, 4);
        prop_assert!(tensor_p(&c, &d).unwrap().check_nilpotent().is_ok());
        prop_assert!(eta(&c).unwrap().is_chain_map().unwrap());
    }

    #[test]
    fn contraction_inverts_tilde(p in prop::sample::select(vec![2u32, 3, 5]), seed in any::<u64>()) {
        let f = Field::prime(p).unwrap();
        let k = random_complex(&f, &mut ChaCha8Rng::seed_from_u64(seed), 5, 4);
        let t = tilde(&k, p as usize).unwrap();
        for s in 1..p as usize {
            let back = contract(&t, s).unwrap();
            prop_assert_eq!(back.dims(), k.dims());
            for i in 0..k.len().saturating_sub(1) {
                prop_assert_eq!(back.d(i), k.d(i));
            }
        }
    }

    #[test]
    fn degrees_and_dimensions(seed in any::<u64>(), a in 0usize..=2, b in 0usize..=2, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_expr(&mut rng, a, 2, 2);
        let y = random_expr(&mut rng, b, 2, 2);
        let t = FunctorExpr::Tensor(vec![x.clone(), y.clone()]);
        prop_assert_eq!(t.degree(2).unwrap(), x.degree(2).unwrap() + y.degree(2).unwrap());
        prop_assert_eq!(eval_space(&t, n).len(), x.dim(n) * y.dim(n));
    }

    #[test]
    fn functoriality(seed in any::<u64>(), deg in 0usize..=3) {
        let f = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, deg, 3, 2);
        let x = random_matrix(&f, &mut rng, 2, 2);
        let y = random_matrix(&f, &mut rng, 2, 2);
        prop_assert_eq!(eval_map(&e, &y.mul(&x).unwrap()).unwrap(), eval_map(&e, &y).unwrap().mul(&eval_map(&e, &x).unwrap()).unwrap());
        prop_assert_eq!(eval_map(&e, &FFMatrix::identity(&f, Basis::indexed(2))).unwrap(), FFMatrix::identity(&f, eval_space(&e, 2)));
    }

    #[test]
    fn shuffle_count_and_signs(a in 0usize..4, b in 0usize..4) {
        let u: Vec<usize> = (1..=a).collect();
        let v: Vec<usize> = (10..10 + b).collect();
        let s = shuffle(&u, &v);
        let binom = (1..=a).fold(1usize, |acc, i| acc * (b + i) / i);
        prop_assert_eq!(s.len(), binom);
        // signs sum to the Gaussian binomial at q = -1
        let expected: i64 = if a % 2 == 1 && b % 2 == 1 { 0 } else { (1..=a / 2).fold(1i64, |acc, i| acc * ((b / 2 + i) as i64) / i as i64) };
        prop_assert_eq!(s.iter().map(|t| t.0).sum::<i64>(), expected);
    }

    #[test]
    fn estimate_is_monotone(p in prop::sample::select(vec![2u32, 3, 5]), d in 1usize..4, n in 1usize..6) {
        let a = estimate(p, d, n, u64::MAX).largest_block;
        prop_assert!(estimate(p, d, n + 1, u64::MAX).largest_block > a);
        prop_assert!(estimate(p, d + 1, n, u64::MAX).largest_block >= a);
    }
}
