//! Verification suites producing [`Report`]s.
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bar::{build_Jd, expected_first_differential, verify_Jd};
use crate::cohomology::{choose_c1, minimal_q, verify_cocycle_sampled, verify_lift, BlobStore, Invariants};
use crate::error::{Error, Result};
use crate::ffalg::{Basis, FFMatrix, Field, FieldRef};
use crate::functor::combin::binomial;
use crate::functor::sample::{random_expr, random_natmap};
use crate::functor::{eval_map, eval_space, FunctorExpr, NatMap};
use crate::pcomplex::random::{random_complex, random_matrix, random_ncomplex};
use crate::pcomplex::{contract, eta, h_map, h_map_big, p_embed, tensor_p, tilde};
use crate::report::{Check, Outcome, Report};
use crate::troesch::{verify_troesch_with, SlotShift, TroeschDifferential};
use crate::twistcat::{check_frobenius, check_lift_square, twist_lift, SymHom, SymSum};

/// Default cap on the largest dense block of a lifted-class run.
pub const DEFAULT_CAP: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Pcomplex,
    Troesch,
    Bar,
    Twist,
    Functor,
    C1,
    Lifted,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "pcomplex" => Suite::Pcomplex,
            "troesch" => Suite::Troesch,
            "bar" => Suite::Bar,
            "twist" => Suite::Twist,
            "functor" => Suite::Functor,
            "c1" => Suite::C1,
            "lifted" => Suite::Lifted,
            "all" => Suite::All,
            _ => return Err(Error::Expr(format!("unknown suite {s}"))),
        })
    }
}

#[derive(Clone)]
pub struct SuiteConfig {
    pub p: u32,
    pub d: usize,
    pub n: Option<usize>,
    pub q: Option<u32>,
    pub seed: u64,
    /// Random cases for the seeded suites.
    pub cases: usize,
    /// Evaluation dimensions for the Troesch and bar suites.
    pub dims: Vec<usize>,
    /// Dimensions below `dp` for partial cocycle checks; when nonempty the
    /// lifted suite runs only these.
    pub sample_dims: Vec<usize>,
    pub force: bool,
    pub cap: u64,
    pub store: Option<Arc<dyn BlobStore>>,
}

impl SuiteConfig {
    pub fn new(p: u32, d: usize) -> Self {
        SuiteConfig {
            p,
            d,
            n: None,
            q: None,
            seed: 0,
            cases: 1000,
            dims: vec![1, 2, 3],
            sample_dims: Vec::new(),
            force: false,
            cap: DEFAULT_CAP,
            store: None,
        }
    }

    /// Rejects configurations no suite can run.
    pub fn validate(&self) -> Result<()> {
        Field::prime(self.p)?;
        if self.d == 0 {
            return Err(Error::Degree("d must be at least 1".into()));
        }
        if let Some(n) = self.n {
            if n < self.d * self.p as usize {
                return Err(Error::Degree(format!("n = {n} is below d·p = {}; use sample dims for partial checks", self.d * self.p as usize)));
            }
        }
        if let Some(q) = self.q {
            let f = Field::of_order(q)?;
            if f.p() != self.p {
                return Err(Error::FieldMismatch(f.p(), self.p));
            }
        }
        Ok(())
    }

    fn field(&self, degree: usize) -> Result<FieldRef> {
        Field::of_order(self.q.unwrap_or_else(|| minimal_q(self.p, degree)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate {
    pub p: u32,
    pub d: usize,
    pub n: usize,
    /// `dim S^p(gl_n)^{⊗d}`, the largest block of the lifted-class run,
    /// saturating at `u64::MAX`.
    pub largest_block: u64,
    pub cap: u64,
    pub within_cap: bool,
}

pub fn estimate(p: u32, d: usize, n: usize, cap: u64) -> Estimate {
    let m = (n * n) as u64;
    let s = binomial(m + p as u64 - 1, p as u64);
    let largest_block = s.checked_pow(d as u32).unwrap_or(u64::MAX);
    Estimate { p, d, n, largest_block, cap, within_cap: largest_block <= cap }
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let mut r = Report::default();
    r.param("suite", suite);
    r.param("p", cfg.p);
    r.param("d", cfg.d);
    r.param("seed", cfg.seed);
    let parts = match suite {
        Suite::All => vec![Suite::Pcomplex, Suite::Troesch, Suite::Bar, Suite::Twist, Suite::Functor, Suite::C1, Suite::Lifted],
        s => vec![s],
    };
    for s in parts {
        r.merge(match s {
            Suite::Pcomplex => pcomplex_suite(cfg.p, cfg.seed, cfg.cases),
            Suite::Troesch => troesch_suite(cfg.p, &cfg.dims, &SlotShift)?,
            Suite::Bar => bar_suite(cfg.p, &cfg.dims)?,
            Suite::Twist => twist_suite(cfg.p)?,
            Suite::Functor => functor_suite(cfg.p, cfg.seed, cfg.cases.min(500).max(1)),
            Suite::C1 => c1_suite(cfg)?,
            Suite::Lifted => lifted_suite(cfg)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(r)
}

fn same_complex(a: &crate::ffalg::BasedComplex, b: &crate::ffalg::BasedComplex) -> bool {
    a.dims() == b.dims() && (0..a.len().saturating_sub(1)).all(|i| a.d(i) == b.d(i))
}

const PCOMPLEX_LAWS: [&str; 7] = [
    "tensor_p keeps d^p = 0",
    "contract(tilde(K), s) = K",
    "eta is a chain map",
    "H is a chain map",
    "h is a chain map",
    "h is the identity on p(C,D)",
    "h^0 and h^1 are identities",
];

fn pcomplex_case(f: &FieldRef, rng: &mut ChaCha8Rng) -> Result<[bool; 7]> {
    let p = f.p() as usize;
    let c = random_ncomplex(f, rng, p, 3 * p, 5);
    let d = random_ncomplex(f, rng, p, 3 * p, 5);
    let k = random_complex(f, rng, 3 * p, 5);
    let mut ok = [true; 7];
    ok[0] = tensor_p(&c, &d)?.check_nilpotent().is_ok();
    let t = tilde(&k, p)?;
    ok[1] = (1..p).all(|s| contract(&t, s).map(|b| same_complex(&b, &k)).unwrap_or(false));
    ok[2] = eta(&c)?.is_chain_map()?;
    let (c1, d1) = (contract(&c, 1)?, contract(&d, 1)?);
    ok[3] = h_map_big(&c1, &d1)?.is_chain_map()?;
    let h = h_map(&c, &d)?;
    ok[4] = h.is_chain_map()?;
    let (l, rr) = p_embed(&c, &d)?;
    ok[5] = (0..l.maps.len()).all(|deg| h.map(deg).mul(&l.maps[deg]).map(|m| m == rr.maps[deg]).unwrap_or(false));
    ok[6] = (0..2.min(h.maps.len())).all(|deg| {
        let m = h.map(deg);
        m.nrows() == m.ncols() && m == FFMatrix::identity(f, Basis::indexed(m.ncols()))
    });
    Ok(ok)
}

/// Seeded random N-complexes of order `p`, lengths up to `3p`, dims up to 5.
pub fn pcomplex_suite(p: u32, seed: u64, cases: usize) -> Report {
    let mut r = Report::default();
    let start = std::time::Instant::now();
    let f = match Field::prime(p) {
        Ok(f) => f,
        Err(e) => {
            r.checks.push(Check::run("pcomplex/field", || Err(e)));
            return r;
        }
    };
    let results: Vec<Result<[bool; 7]>> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(i as u64));
            pcomplex_case(&f, &mut rng)
        })
        .collect();
    let elapsed = start.elapsed().as_millis() as u64;
    let errors = results.iter().filter(|x| x.is_err()).count();
    for (j, law) in PCOMPLEX_LAWS.iter().enumerate() {
        let failures = results.iter().filter(|x| matches!(x, Ok(ok) if !ok[j])).count() + errors;
        let mut c = Check::run(format!("pcomplex/p={p}/{law}"), || {
            Ok(Outcome::new(failures == 0).dims(vec![cases]).residual(failures).note(format!("{cases} seeded cases")))
        });
        c.wall_time_ms = elapsed;
        r.checks.push(c);
    }
    r
}

/// `B_n` for `n = 1..2p`, every contraction, at each dimension in `dims`.
pub fn troesch_suite(p: u32, dims: &[usize], diff: &dyn TroeschDifferential) -> Result<Report> {
    let f = Field::prime(p)?;
    let mut r = Report::default();
    for n in 1..=2 * p as usize {
        let mut rows = Vec::new();
        let check = Check::run(format!("troesch/p={p}/B_{n}"), || {
            let rep = verify_troesch_with(diff, n, &f, dims)?;
            let bad = rep.rows.iter().filter(|x| !x.pass).count();
            rows = rep.rows.clone();
            let note = if rep.pass {
                format!("differential {}; {} contraction(s) checked", rep.differential, rep.rows.len())
            } else {
                format!("differential {} fails; escalate by substituting another TroeschDifferential", rep.differential)
            };
            Ok(Outcome::new(rep.pass).dims(dims.to_vec()).residual(bad).note(note))
        });
        for row in rows {
            r.homology_tables.insert(format!("troesch/p={p}/B_{n}/m={}/s={}", row.dim, row.s), row.homology);
        }
        r.checks.push(check);
    }
    Ok(r)
}

/// Degree 0/1 shape of `J_d` for `d ≤ 4` and `H^*(J_d(V)) = Γ^d(V)` for `d ≤ 3`.
pub fn bar_suite(p: u32, dims: &[usize]) -> Result<Report> {
    let f = Field::prime(p)?;
    let mut r = Report::default();
    for d in 1..=4 {
        r.checks.push(Check::run(format!("bar/J_{d}/degrees 0 and 1"), || {
            let j = build_Jd(d)?;
            let mut ok = j.is_complex()? && j.objects[0] == SymSum::tensor_power(d);
            if d >= 2 {
                let one = &j.objects[1];
                ok &= one.parts.len() == d - 1 && one.parts.iter().all(|x| *x == vec![1; d]);
                let e = expected_first_differential(&j, d)?;
                ok &= j.diffs[0] == e && j.diffs[0].eval(&f, d)? == e.eval(&f, d)?;
            } else {
                ok &= j.objects.len() == 1;
            }
            Ok(Outcome::new(ok).dims(j.objects.iter().map(|o| o.dim(d)).collect()))
        }));
    }
    for d in 1..=3 {
        let mut rows = Vec::new();
        r.checks.push(Check::run(format!("bar/J_{d}/resolves Gamma^{d}"), || {
            let rep = verify_Jd(d, &f, dims)?;
            rows = rep.rows.clone();
            Ok(Outcome::new(rep.pass).dims(dims.to_vec()).residual(rep.rows.iter().filter(|x| !x.pass).count()))
        }));
        for row in rows {
            r.homology_tables.insert(format!("bar/p={p}/J_{d}/m={}", row.dim), row.homology);
        }
    }
    Ok(r)
}

fn lift_of(f: &SymHom, p: u32) -> Result<SymHom> {
    twist_lift(f, p)?.ok_or_else(|| Error::NotTwistCompatible(f.to_string()))
}

/// Lifts of the differentials of `J_d`, `d ≤ 3`, their laws, and the
/// rejection of the comultiplication at `p = 2`.
pub fn twist_suite(p: u32) -> Result<Report> {
    let f = Field::prime(p)?;
    let mut r = Report::default();
    for d in 1..=3 {
        r.checks.push(Check::run(format!("twist/p={p}/J_{d} differentials lift"), || {
            let j = build_Jd(d)?;
            let mut bad = 0;
            for g in &j.diffs {
                let ok = match twist_lift(g, p)? {
                    Some(l) => check_lift_square(g, &l, &f, 2)? && check_frobenius(g, &l, &f, 2)?,
                    None => false,
                };
                bad += usize::from(!ok);
            }
            Ok(Outcome::new(bad == 0).dims(vec![j.diffs.len()]).residual(bad))
        }));
    }
    r.checks.push(Check::run(format!("twist/p={p}/lifts are unique"), || {
        // f̄ is determined on the image of S^λ(S^p) -> S^{pλ}, which is onto
        let mut ok = true;
        for k in 1..=3 {
            let m = NatMap::PowerMult { n: k, p: p as usize }.eval(&f, 2)?;
            ok &= m.rank() == m.nrows();
        }
        Ok(Outcome::new(ok).note("multiplications S^k(S^p) -> S^{kp} are onto at dim 2"))
    }));
    r.checks.push(Check::run(format!("twist/p={p}/linearity and composition"), || {
        let s = SymSum::tensor_power(2);
        let id = SymHom::identity(&s);
        let tau = SymHom::permutation(&[1, 1], &[1, 0]);
        let mult = SymHom::multiply(&[1, 1]);
        let ev = |h: &SymHom| h.eval(&f, 2);
        let lin = ev(&lift_of(&id.lin_comb(1, &tau, 2)?, p)?)? == ev(&lift_of(&id, p)?.lin_comb(1, &lift_of(&tau, p)?, 2)?)?;
        let comp = ev(&lift_of(&mult.compose(&tau)?, p)?)? == ev(&lift_of(&mult, p)?.compose(&lift_of(&tau, p)?)?)?;
        let mut ok = lin && comp;
        for d in 2..=3 {
            let j = build_Jd(d)?;
            let sigma: Vec<usize> = (0..d).rev().collect();
            let perm = SymHom::permutation(&vec![1; d], &sigma);
            let g = &j.diffs[0];
            ok &= ev(&lift_of(&g.compose(&perm)?, p)?)? == ev(&lift_of(g, p)?.compose(&lift_of(&perm, p)?)?)?;
        }
        Ok(Outcome::new(ok))
    }));
    r.checks.push(Check::run("twist/p=2/comultiplication rejected", || {
        Ok(Outcome::new(twist_lift(&SymHom::comultiply(&[1, 1]), 2)?.is_none()).note("S^2 -> S^1 ⊗ S^1"))
    }));
    Ok(r)
}

/// Functoriality, naturality and dimension counts on seeded samples.
pub fn functor_suite(p: u32, seed: u64, cases: usize) -> Report {
    let mut r = Report::default();
    let field = match Field::new(p, 2) {
        Ok(f) => f,
        Err(e) => {
            r.checks.push(Check::run("functor/field", || Err(e)));
            return r;
        }
    };
    let f = &field;
    r.checks.push(Check::run(format!("functor/p={p}/functoriality"), || {
        let bad = (0..cases)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xf0 + i as u64));
                let deg = rng.gen_range(0..=3);
                let e = random_expr(&mut rng, deg, p, 2);
                let (a, b, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
                let x = random_matrix(f, &mut rng, b, a);
                let y = random_matrix(f, &mut rng, c, b);
                let id = FFMatrix::identity(f, Basis::indexed(a));
                let comp = eval_map(&e, &y.mul(&x)?)? == eval_map(&e, &y)?.mul(&eval_map(&e, &x)?)?;
                let unit = eval_map(&e, &id)? == FFMatrix::identity(f, eval_space(&e, a));
                Ok(comp && unit)
            })
            .filter(|x| !matches!(x, Ok(true)))
            .count();
        Ok(Outcome::new(bad == 0).dims(vec![cases]).residual(bad))
    }));
    r.checks.push(Check::run(format!("functor/p={p}/naturality"), || {
        let bad = (0..cases)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x5a00 + i as u64));
                let u = random_natmap(&mut rng, p, 4, 1);
                let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                let x = random_matrix(f, &mut rng, b, a);
                let (s, t) = (u.source()?, u.target()?);
                Ok(u.eval(f, b)?.mul(&eval_map(&s, &x)?)? == eval_map(&t, &x)?.mul(&u.eval(f, a)?)?)
            })
            .filter(|x| !matches!(x, Ok(true)))
            .count();
        Ok(Outcome::new(bad == 0).dims(vec![cases]).residual(bad))
    }));
    r.checks.push(Check::run(format!("functor/p={p}/dimension counts"), || {
        let mut bad = 0;
        for n in 1..=4usize {
            for d in 0..=4usize {
                let (nn, dd) = (n as u64, d as u64);
                let sym = binomial(nn + dd - 1, dd) as usize;
                bad += usize::from(eval_space(&FunctorExpr::Sym(d), n).len() != sym);
                bad += usize::from(eval_space(&FunctorExpr::Gamma(d), n).len() != sym);
                bad += usize::from(eval_space(&FunctorExpr::Ext(d), n).len() != binomial(nn, dd) as usize);
                bad += usize::from(eval_space(&FunctorExpr::tensor_power(d), n).len() != n.pow(d as u32));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cases {
            let deg = rng.gen_range(0..=3);
                let e = random_expr(&mut rng, deg, p, 2);
            let n = rng.gen_range(1..=3);
            bad += usize::from(eval_space(&e, n).len() != e.dim(n));
        }
        Ok(Outcome::new(bad == 0).residual(bad))
    }));
    r
}

/// `H^2` of the invariants of `(A_1)_[1](gl_n)`, by default at `n = p`.
pub fn c1_suite(cfg: &SuiteConfig) -> Result<Report> {
    let p = cfg.p;
    let n = cfg.n.unwrap_or(p as usize);
    let field = cfg.field(p as usize)?;
    let mut r = Report::default();
    r.param("q", field.q());
    r.param("n", n);
    let inv = invariants_engine(n, &field, cfg);
    let mut table = None;
    r.checks.push(Check::run(format!("c1/p={p}/n={n}/q={}/H^2 dimension 1", field.q()), || {
        let c = choose_c1(&inv)?;
        let ok = c.homology_dims.get(2) == Some(&1) && c.homology_dims.first() == Some(&1);
        table = Some(c.homology_dims.clone());
        Ok(Outcome::new(ok).dims(c.invariant_dims).note("H^0 and H^2 of the invariant complex are one dimensional"))
    }));
    if let Some(t) = table {
        r.homology_tables.insert(format!("c1/p={p}/n={n}/invariants of (A_1)_[1]"), t);
    }
    record_cache(&mut r, &inv);
    Ok(r)
}

fn record_cache(r: &mut Report, inv: &Invariants) {
    use std::sync::atomic::Ordering;
    r.param("invariant_blocks_computed", inv.computed.load(Ordering::Relaxed));
    r.param("invariant_blocks_loaded", inv.loaded.load(Ordering::Relaxed));
}

fn invariants_engine(n: usize, field: &FieldRef, cfg: &SuiteConfig) -> Invariants {
    let inv = Invariants::new(n, field);
    match &cfg.store {
        Some(s) => inv.with_store(s.clone()),
        None => inv,
    }
}

/// The lifted class comparison at `n = dp`, or partial cocycle checks at
/// the sample dimensions.
pub fn lifted_suite(cfg: &SuiteConfig) -> Result<Report> {
    let (p, d) = (cfg.p, cfg.d);
    let mut r = Report::default();
    if !cfg.sample_dims.is_empty() {
        let field = cfg.field(p as usize)?;
        r.param("q", field.q());
        r.param("sample_dims", &cfg.sample_dims);
        let reps = verify_cocycle_sampled(d, &field, &cfg.sample_dims)?;
        for rep in reps {
            r.checks.push(Check::run(format!("lifted/p={p}/d={d}/n={}/z[d] cocycle", rep.n), || {
                let o = Outcome::new(rep.pass)
                    .dims(vec![rep.nnz])
                    .residual(rep.vertical_residual + rep.horizontal_residual + usize::from(!rep.symmetric));
                Ok(if rep.conclusive { o } else { o.partial().note("sound partial check, not conclusive (n < dp)") })
            }));
        }
        return Ok(r);
    }
    let n = cfg.n.unwrap_or(d * p as usize);
    let est = estimate(p, d, n, cfg.cap);
    r.param("n", n);
    r.param("estimate", &est);
    if !est.within_cap && !cfg.force {
        return Err(Error::Budget(format!(
            "largest block at p={p}, d={d}, n={n} has {} columns, above the cap of {}; pass --force to run anyway",
            est.largest_block, cfg.cap
        )));
    }
    let field = cfg.field(p as usize * d)?;
    r.param("q", field.q());
    let inv = invariants_engine(n, &field, cfg);
    let rep = verify_lift(d, &inv, true)?;
    let name = |s: &str| format!("lifted/p={p}/d={d}/n={n}/{s}");
    let partial = |o: Outcome| if rep.conclusive { o } else { o.partial().note("sound partial check, not conclusive (n < dp)") };
    let c = &rep.cocycle;
    r.checks.push(Check::run(name("c1 H^2 dimension 1"), || Ok(Outcome::new(rep.c1_homology.get(2) == Some(&1)))));
    r.checks.push(Check::run(name("z[d] vertical cocycle"), || {
        Ok(partial(Outcome::new(c.vertical_residual == 0).dims(vec![c.nnz]).residual(c.vertical_residual)))
    }));
    r.checks.push(Check::run(name("z[d] horizontal cocycle"), || {
        let o = Outcome::new(c.horizontal_residual == 0).dims(vec![c.nnz]).residual(c.horizontal_residual);
        Ok(partial(if c.offending_blocks.is_empty() { o } else { o.note(format!("offending blocks {:?}", c.offending_blocks)) }))
    }));
    r.checks.push(Check::run(name("z[d] symmetric"), || Ok(partial(Outcome::new(c.symmetric)))));
    r.checks.push(Check::run(name("cup power equals z[d] as cochains"), || {
        Ok(partial(Outcome::new(rep.equal).residual(rep.residual)))
    }));
    r.checks.push(Check::run(name("cup power cohomologous to z[d]"), || {
        Ok(partial(Outcome::new(rep.cohomologous).residual(rep.residual)))
    }));
    r.checks.push(Check::run(name("coresolutions acyclic in degrees 1-3"), || {
        Ok(Outcome::new(rep.acyclic).dims(vec![rep.expected_h0]).note("evaluated complexes; H^0 is (gl^(1))^{⊗d}"))
    }));
    r.homology_tables.insert(name("invariants of (A_1)_[1]"), rep.c1_homology.clone());
    r.homology_tables.insert(name("(A_1)_[1]^{⊗d}"), rep.left_homology.clone());
    r.homology_tables.insert(name("(A_1^{⊗d})_[1]"), rep.right_homology.clone());
    if let Some(t) = &rep.invariant_homology {
        r.homology_tables.insert(name("invariants of (A_1^{⊗d})_[1]"), t.clone());
    }
    record_cache(&mut r, &inv);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimates() {
        assert_eq!(estimate(2, 2, 4, DEFAULT_CAP).largest_block, 18496);
        assert!(estimate(2, 2, 4, DEFAULT_CAP).within_cap);
        assert!(!estimate(3, 2, 6, DEFAULT_CAP).within_cap);
        assert!(estimate(3, 1, 3, DEFAULT_CAP).within_cap);
    }

    #[test]
    fn refuses_over_budget() {
        let cfg = SuiteConfig::new(5, 3);
        assert!(matches!(run(Suite::Lifted, &cfg), Err(Error::Budget(_))));
    }

    #[test]
    fn invalid_configs() {
        assert!(SuiteConfig::new(4, 1).validate().is_err());
        assert!(SuiteConfig::new(2, 0).validate().is_err());
        let mut c = SuiteConfig::new(2, 2);
        c.n = Some(3);
        assert!(c.validate().is_err());
        c.n = None;
        c.q = Some(27);
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        let a = pcomplex_suite(3, 5, 40);
        assert!(a.passed(), "{}", a.to_json());
        assert_eq!(a.canonical(), pcomplex_suite(3, 5, 40).canonical());
        let f = functor_suite(2, 1, 60);
        assert!(f.passed(), "{}", f.to_json());
    }

    #[test]
    fn lifted_d1() {
        let r = run(Suite::Lifted, &SuiteConfig::new(2, 1)).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.homology_tables["lifted/p=2/d=1/n=2/invariants of (A_1)_[1]"][2], 1);
    }
}
