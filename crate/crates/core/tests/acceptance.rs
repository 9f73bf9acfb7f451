use std::process::ExitCode;
use std::time::{Duration, Instant};

use glcoh::cohomology::{choose_c1, Invariants};
use glcoh::ffalg::Field;
use glcoh::report::Report;
use glcoh::suites::{self, estimate, Suite, SuiteConfig, DEFAULT_CAP};
use glcoh::troesch::SlotShift;
use glcoh::Error;

struct Line {
    pass: bool,
    detail: String,
}

fn failures(r: &Report) -> Vec<String> {
    r.checks.iter().filter(|c| !c.passed()).map(|c| format!("{} ({})", c.name, c.note)).collect()
}

fn from_reports(reports: &[Report], extra: &str) -> Line {
    let bad: Vec<String> = reports.iter().flat_map(failures).collect();
    let n: usize = reports.iter().map(|r| r.checks.len()).sum();
    Line { pass: bad.is_empty(), detail: if bad.is_empty() { format!("{n} checks{extra}") } else { bad.join("; ") } }
}

fn c1() -> Line {
    fn dims(p: u32, n: usize, q: u32) -> Result<Vec<usize>, Error> {
        let f = Field::of_order(q)?;
        assert_eq!(f.p(), p);
        Ok(choose_c1(&Invariants::new(n, &f))?.homology_dims)
    }
    let mut detail = Vec::new();
    let mut pass = true;
    for (p, n, q) in [(2, 2, 32), (3, 3, 27)] {
        let t = Instant::now();
        match dims(p, n, q) {
            Ok(h) => {
                let ok = h.get(2) == Some(&1) && t.elapsed() < Duration::from_secs(300);
                pass &= ok;
                detail.push(format!("(p={p}, n={n}, q={q}) H^* = {h:?}"));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("(p={p}, n={n}, q={q}) error {e}"));
            }
        }
    }
    Line { pass, detail: detail.join(", ") }
}

fn flagship() -> Line {
    let est = estimate(2, 2, 4, DEFAULT_CAP);
    let mut cfg = SuiteConfig::new(2, 2);
    cfg.n = Some(4);
    cfg.q = Some(32);
    match suites::run(Suite::Lifted, &cfg) {
        Ok(r) => {
            let conclusive = r.checks.iter().all(|c| c.conclusive);
            let mut line = from_reports(&[r.clone()], &format!(", largest block {}", est.largest_block));
            line.pass &= conclusive && est.largest_block == 18496;
            let inv = r.homology_tables.iter().find(|(k, _)| k.contains("invariants of (A_1^"));
            if let Some((_, h)) = inv {
                line.detail.push_str(&format!(", invariant H^* {h:?}"));
            }
            line
        }
        Err(e) => Line { pass: false, detail: e.to_string() },
    }
}

fn odd_partial() -> Line {
    let mut cfg = SuiteConfig::new(3, 2);
    cfg.sample_dims = vec![1, 2, 3];
    let refused = matches!(suites::run(Suite::Lifted, &SuiteConfig::new(3, 2)), Err(Error::Budget(_)));
    match suites::run(Suite::Lifted, &cfg) {
        Ok(r) => {
            let labelled = r.checks.iter().all(|c| !c.conclusive && c.note.contains("not conclusive"));
            let mut line = from_reports(&[r], ", all labelled partial");
            line.pass &= labelled && refused;
            line.detail.push_str(if refused { ", n = 6 refused by the estimator" } else { ", n = 6 NOT refused" });
            line
        }
        Err(e) => Line { pass: false, detail: e.to_string() },
    }
}

fn timed(budget_s: u64, f: impl FnOnce() -> Line) -> Line {
    let t = Instant::now();
    let mut line = f();
    let el = t.elapsed();
    if el > Duration::from_secs(budget_s) {
        line.pass = false;
        line.detail.push_str(&format!(", over the {budget_s} s budget"));
    }
    line.detail.push_str(&format!(" [{:.1} s]", el.as_secs_f64()));
    line
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Line>)> = vec![
        (
            "p-complex calculus on 1200 random N-complexes, p in {2,3,5}",
            Box::new(|| timed(60, || from_reports(&[2, 3, 5].map(|p| suites::pcomplex_suite(p, 2024, 400)), ""))),
        ),
        (
            "Troesch complexes, p in {2,3}, n <= 2p, dims <= 3",
            Box::new(|| {
                timed(120, || {
                    let rs: Vec<Report> =
                        [2, 3].iter().map(|&p| suites::troesch_suite(p, &[1, 2, 3], &SlotShift).unwrap_or_default()).collect();
                    let mut l = from_reports(&rs, "");
                    l.pass &= rs.iter().all(|r| r.checks.len() == 4 || r.checks.len() == 6);
                    l
                })
            }),
        ),
        (
            "bar coresolutions J_d: shape for d <= 4, Gamma^d for d <= 3",
            Box::new(|| timed(120, || from_reports(&[2, 3].map(|p| suites::bar_suite(p, &[1, 2, 3]).unwrap_or_default()), ""))),
        ),
        (
            "twist compatibility of J_d, d <= 3",
            Box::new(|| timed(60, || from_reports(&[2, 3].map(|p| suites::twist_suite(p).unwrap_or_default()), ""))),
        ),
        ("c[1] is nonzero: H^2 of the invariants is one dimensional", Box::new(c1)),
        ("p = 2, d = 2, n = 4, q = 32: cocycle, cup equality, acyclicity", Box::new(|| timed(900, flagship))),
        ("p = 3, d = 2: sampled cocycle checks and estimator refusal", Box::new(|| timed(600, odd_partial))),
        (
            "functor engine laws on 500 seeded cases",
            Box::new(|| timed(120, || from_reports(&[2, 3].map(|p| suites::functor_suite(p, 7, 500)), ""))),
        ),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let line = f();
        all &= line.pass;
        println!("criterion {}: {} : {name} : {}", i + 1, if line.pass { "PASS" } else { "FAIL" }, line.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
