mod store;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use glcoh::bar::build_Jd;
use glcoh::suites::{self, estimate, Suite, SuiteConfig, DEFAULT_CAP};
use glcoh::Error;
use serde_json::json;

use store::DiskStore;

const USAGE: u8 = 2;
const REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "glcoh", version, about = "Exact verification of lifted cohomology classes of GL_n over finite fields")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cache directory; falls back to GLCOH_CACHE_DIR, then .glcoh-cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: pcomplex, troesch, bar, twist, functor, c1, lifted or all.
    Verify(VerifyArgs),
    /// Build an artifact.
    Build {
        #[command(subcommand)]
        what: BuildCmd,
    },
    /// Predicted largest block of a lifted-class run.
    Estimate {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Inspect or clear the on-disk cache.
    Cache {
        #[command(subcommand)]
        action: CacheCmd,
    },
}

#[derive(Subcommand)]
enum BuildCmd {
    /// The bar coresolution J_d as JSON.
    Bar {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CacheCmd {
    Stats,
    Clear,
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random cases for the pcomplex and functor suites.
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    /// Evaluation dimensions for the troesch and bar suites.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    dims: Vec<usize>,
    /// Partial cocycle checks at these dimensions instead of the full lifted run.
    #[arg(long, value_delimiter = ',')]
    sample_dims: Vec<usize>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Run even when the estimator predicts a block above the cap.
    #[arg(long)]
    force: bool,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long)]
    no_cache: bool,
}

fn cache_dir(cli: &Option<PathBuf>) -> PathBuf {
    cli.clone()
        .or_else(|| std::env::var_os("GLCOH_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".glcoh-cache"))
}

fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn verify(args: VerifyArgs, dir: PathBuf) -> ExitCode {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    };
    let mut cfg = SuiteConfig::new(args.p, args.d);
    cfg.n = args.n;
    cfg.q = args.q;
    cfg.seed = args.seed;
    cfg.cases = args.cases;
    cfg.dims = args.dims;
    cfg.sample_dims = args.sample_dims;
    cfg.force = args.force;
    cfg.cap = args.cap;
    if !args.no_cache {
        match DiskStore::open(&dir) {
            Ok(s) => cfg.store = Some(Arc::new(s)),
            Err(e) => eprintln!("warning: cache at {} unavailable: {e}", dir.display()),
        }
    }
    let report = match suites::run(suite, &cfg) {
        Ok(r) => r,
        Err(Error::Budget(msg)) => {
            eprintln!("refused: {msg}");
            return ExitCode::from(REFUSED);
        }
        Err(e @ (Error::Degree(_) | Error::Field { .. } | Error::FieldMismatch(..) | Error::FieldTooSmall { .. })) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    for c in &report.checks {
        let tag = if c.passed() { "pass" } else { "FAIL" };
        let partial = if c.conclusive { "" } else { " (partial)" };
        println!("{tag:4} {}{partial} [{} ms]", c.name, c.wall_time_ms);
    }
    if let Some(path) = &args.report {
        if let Err(e) = write_atomic(path, &report.to_json()) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }
    let failed = report.checks.iter().filter(|c| !c.passed()).count();
    println!("{} checks, {failed} failed", report.checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn build_bar(d: usize, out: Option<PathBuf>) -> ExitCode {
    let j = match build_Jd(d) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    };
    let doc = json!({
        "d": d,
        "objects": j.objects.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "words": j.words.iter().map(|ws| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "differentials": j.diffs.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("json");
    match out {
        Some(path) => {
            if let Err(e) = write_atomic(&path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let dir = cache_dir(&cli.cache_dir);
    match cli.command {
        Command::Verify(args) => verify(args, dir),
        Command::Build { what: BuildCmd::Bar { d, out } } => build_bar(d, out),
        Command::Estimate { p, d, n, cap } => {
            let e = estimate(p, d, n.unwrap_or(d * p as usize), cap);
            println!("{}", serde_json::to_string_pretty(&e).expect("json"));
            if e.within_cap {
                ExitCode::SUCCESS
            } else {
                eprintln!("refused: largest block {} exceeds the cap {}", e.largest_block, e.cap);
                ExitCode::from(REFUSED)
            }
        }
        Command::Cache { action } => {
            let store = match DiskStore::open(&dir) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            let res = match action {
                CacheCmd::Stats => store.stats().map(|s| {
                    println!("{}: {} entries, {} bytes", store.dir().display(), s.entries, s.bytes);
                }),
                CacheCmd::Clear => store.clear().map(|k| println!("removed {k} entries")),
            };
            match res {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
