mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polylie::cache::{BasisCache, CacheKey};
use polylie::checks;
use polylie::cluster::{cl_space, ClusterError, DEFAULT_GUARD};
use polylie::confspace::inv_space;
use polylie::corr::symbol;
use polylie::gangl::{gangl_suite, zagier_configuration_symbol};
use polylie::quad::{binomial_sum, main_equation_lhs, psi_identity_check, qli_coproduct_check, qli_dimension};

use report::{Params, Reporter, Verdict};

const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(name = "polylie", version, about = "Exact checks of polylogarithm identities and symbol spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON-lines report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Basis cache directory; falls back to $POLYLIE_CACHE_DIR.
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long = "guard-limit", global = true, default_value_t = DEFAULT_GUARD)]
    guard_limit: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cobracket, projection, specialization and cross-ratio properties.
    VerifyCoalgebra(CoalgebraArgs),
    /// Power-series identity behind the main equation.
    VerifyPsi(PsiArgs),
    /// Symbol of the main functional equation vanishes.
    VerifyQliEquation(EquationArgs),
    /// Coproduct formula for QLi.
    VerifyQliCoproduct(NkArgs),
    /// Cyclic symmetry of the symmetrized QLi symbol.
    VerifySymmetry(NkArgs),
    /// Adjacency, integrability and torus invariance of QLi symbols.
    VerifyAdjacency(NkArgs),
    /// Dimension of the span of QLi symbols.
    DimQli(NmArgs),
    /// Dimension of the cluster polylogarithm space.
    DimCl(ClArgs),
    /// Dimension of the translation invariant subspace.
    DimInv(NmArgs),
    /// The weight-4 chain of relations.
    VerifyGangl4(Gangl4Args),
    /// The weight-6 chain of relations.
    VerifyGangl6,
    /// Manage the basis cache.
    Cache(CacheArgs),
}

#[derive(Args)]
struct Gangl4Args {
    /// Also report the six-point QLi_4 identity in the involution
    /// configuration. Informational; never changes the exit code.
    #[arg(long)]
    zagier: bool,
}

#[derive(Args)]
struct CoalgebraArgs {
    #[arg(long, default_value_t = 4)]
    weight: usize,
    #[arg(long, default_value_t = 5)]
    points: usize,
}

#[derive(Args)]
struct PsiArgs {
    #[arg(long = "N")]
    big_n: usize,
    #[arg(long)]
    degree: Option<usize>,
}

#[derive(Args)]
struct EquationArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "N")]
    big_n: usize,
}

#[derive(Args)]
struct NkArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct NmArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Args)]
struct ClArgs {
    #[arg(long)]
    weight: usize,
    #[arg(long)]
    points: usize,
}

#[derive(Args)]
struct CacheArgs {
    action: CacheAction,
}

#[derive(Clone, Copy, ValueEnum)]
enum CacheAction {
    List,
    Clear,
    Verify,
}

/// Invalid parameters detected after parsing.
struct Usage(String);

type Res = Result<(), Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rep = match Reporter::new(cli.out.as_deref()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("polylie: cannot open report: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli, &mut rep) {
        Ok(Ok(())) => ExitCode::from(rep.exit_code() as u8),
        Ok(Err(Usage(msg))) => {
            eprintln!("polylie: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("polylie: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, rep: &mut Reporter) -> Result<Result<(), Usage>, Box<dyn std::error::Error>> {
    let seed = cli.seed;
    match &cli.cmd {
        Cmd::VerifyCoalgebra(a) => {
            if a.weight < 2 || a.points < 2 || a.points > 8 {
                return Ok(Err(Usage("need --weight ≥ 2 and 2 ≤ --points ≤ 8".into())));
            }
            coalgebra(rep, a, seed)?;
        }
        Cmd::VerifyPsi(a) => {
            let degree = a.degree.unwrap_or(a.big_n + 4);
            if a.big_n == 0 || degree <= a.big_n || degree > 64 {
                return Ok(Err(Usage("need --N ≥ 1 and N < --degree ≤ 64".into())));
            }
            let t = Instant::now();
            let ok = psi_identity_check(a.big_n, degree);
            let p = Params::new().with("N", a.big_n).with("degree", degree);
            rep.check("verify-psi", &p, ok, ok.to_string(), t)?;
        }
        Cmd::VerifyQliEquation(a) => {
            if a.n < 1 || a.n + 1 >= a.big_n {
                return Ok(Err(Usage("the main equation needs 1 ≤ n < N − 1".into())));
            }
            let t = Instant::now();
            let s = symbol(&main_equation_lhs(a.n, a.big_n)?)?;
            let p = Params::new().with("n", a.n).with("N", a.big_n);
            rep.emit("verify-qli-equation", &p, verdict(s.is_zero()), "0".into(), summarize(&s.to_string()), t)?;
        }
        Cmd::VerifyQliCoproduct(a) => {
            if a.n == 0 || a.n + a.k > 4 {
                return Ok(Err(Usage("need n ≥ 1 and n + k ≤ 4".into())));
            }
            let t = Instant::now();
            let ok = qli_coproduct_check(a.n, a.k)?;
            rep.check("verify-qli-coproduct", &Params::new().with("n", a.n).with("k", a.k), ok, ok.to_string(), t)?;
        }
        Cmd::VerifySymmetry(a) => {
            if a.n == 0 || a.n + a.k > 5 || 2 * a.n + 2 > 8 {
                return Ok(Err(Usage("need n ≥ 1, n + k ≤ 5 and at most 8 points".into())));
            }
            let t = Instant::now();
            let stated: i8 = if (a.n + a.k) % 2 == 0 { 1 } else { -1 };
            let sign = checks::cyclic_symmetry_sign(a.n, a.k)?;
            let computed = sign.map_or("not proportional".to_string(), |s| s.to_string());
            let p = Params::new().with("n", a.n).with("k", a.k);
            rep.emit("verify-symmetry", &p, verdict(sign == Some(stated)), stated.to_string(), computed, t)?;
        }
        Cmd::VerifyAdjacency(a) => {
            if a.n == 0 || a.n + a.k > 5 || 2 * a.n + 2 > 8 {
                return Ok(Err(Usage("need n ≥ 1, n + k ≤ 5 and at most 8 points".into())));
            }
            let t = Instant::now();
            let v = checks::qli_cluster_verdict(a.n, a.k)?;
            let p = Params::new().with("n", a.n).with("k", a.k);
            rep.emit("verify-adjacency", &p, verdict(v.all()), "adjacent integrable torus".into(), format!("{v:?}"), t)?;
        }
        Cmd::DimQli(a) => {
            if a.n < 2 || a.m < 3 {
                return Ok(Err(Usage("need n ≥ 2 and m ≥ 3".into())));
            }
            let t = Instant::now();
            let d = qli_dimension(a.n, a.m)?;
            let e = binomial_sum(a.m, 3, a.n + 1);
            rep.emit("dim-qli", &Params::new().with("n", a.n).with("m", a.m), verdict(d == e), e.to_string(), d.to_string(), t)?;
        }
        Cmd::DimCl(a) => return dim_cl(cli, rep, a),
        Cmd::DimInv(a) => {
            if a.n < 2 {
                return Ok(Err(Usage("need n ≥ 2".into())));
            }
            let t = Instant::now();
            let d = inv_space(a.n, a.m)?.rank();
            let e = binomial_sum(a.m, 2, a.n);
            rep.emit("dim-inv", &Params::new().with("n", a.n).with("m", a.m), verdict(d == e), e.to_string(), d.to_string(), t)?;
        }
        Cmd::VerifyGangl4(a) => {
            gangl(rep, 4)?;
            if a.zagier {
                zagier(rep)?;
            }
        }
        Cmd::VerifyGangl6 => gangl(rep, 6)?,
        Cmd::Cache(a) => return cache(cli, rep, a.action),
    }
    Ok(Ok(()))
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Residuals can be huge; reports keep the first part.
fn summarize(s: &str) -> String {
    const MAX: usize = 400;
    match s.char_indices().nth(MAX) {
        Some((i, _)) => format!("{}… ({} chars)", &s[..i], s.chars().count()),
        None => s.to_string(),
    }
}

fn coalgebra(rep: &mut Reporter, a: &CoalgebraArgs, seed: u64) -> Res {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for w in 2..=a.weight.min(6) {
        let t = Instant::now();
        let exhaustive = a.points.pow(w as u32 + 1) <= 200_000;
        let (count, bad) = if exhaustive {
            let terms = checks::all_correlators(w, a.points);
            let bad = terms.iter().filter(|c| !checks::cobracket_twice(&polylie::corr::CorVec::unit((*c).clone())).is_zero()).count();
            (terms.len(), bad)
        } else {
            let bad = (0..200)
                .filter(|_| !checks::cobracket_twice(&checks::random_correlator(&mut rng, w, a.points)).is_zero())
                .count();
            (200, bad)
        };
        let mode = if exhaustive { "exhaustive" } else { "random" };
        let p = Params::new().with("weight", w).with("points", a.points).with("mode", mode).with("seed", seed);
        rep.emit("cojacobi", &p, verdict(bad == 0), format!("{count} ok"), format!("{} ok", count - bad), t)?;
    }
    for w in 7..=a.weight {
        let p = Params::new().with("weight", w).with("points", a.points);
        rep.emit("cojacobi", &p, Verdict::Skipped, String::new(), "checked up to weight 6".into(), Instant::now())?;
    }
    for w in 1..=a.weight.min(5) {
        let t = Instant::now();
        let ok = (0..50).all(|_| checks::projection_idempotent(&checks::random_tensor(&mut rng, w, 3, 6)));
        rep.check("projection-idempotent", &Params::new().with("weight", w).with("seed", seed), ok, ok.to_string(), t)?;
    }
    for letters in 2..=4u8 {
        for w in 2..=a.weight.min(5) {
            let t = Instant::now();
            let k = checks::cobracket_kernel_dim(letters, w);
            let p = Params::new().with("letters", letters).with("weight", w);
            rep.emit("cobracket-injective", &p, verdict(k == 0), "0".into(), k.to_string(), t)?;
        }
    }
    for (m, n) in [(0, 2), (0, 3), (1, 3), (1, 4)] {
        let t = Instant::now();
        let s = checks::nondecreasing_sum_symbol(m, n)?;
        rep.emit("nondecreasing-sum", &Params::new().with("m", m).with("n", n), verdict(s.is_zero()), "0".into(), summarize(&s.to_string()), t)?;
    }
    let t = Instant::now();
    let mut bad = 0;
    for s in checks::permutations4() {
        bad += !checks::cross_ratio_sign_defect(s)?.is_zero() as usize;
    }
    rep.emit("cross-ratio-sign", &Params::new(), verdict(bad == 0), "24 ok".into(), format!("{} ok", 24 - bad), t)?;
    for w in 2..=a.weight.min(5) {
        let t = Instant::now();
        let mut bad = 0;
        for _ in 0..100 {
            bad += !checks::specialization_case(&mut rng, w)?.1 as usize;
        }
        let p = Params::new().with("weight", w).with("cases", 100).with("seed", seed);
        rep.emit("specialization-commutes", &p, verdict(bad == 0), "100 ok".into(), format!("{} ok", 100 - bad), t)?;
    }
    Ok(())
}

fn dim_cl(cli: &Cli, rep: &mut Reporter, a: &ClArgs) -> Result<Result<(), Usage>, Box<dyn std::error::Error>> {
    if a.weight == 0 || a.points < 4 {
        return Ok(Err(Usage("need --weight ≥ 1 and --points ≥ 4".into())));
    }
    let t = Instant::now();
    let m = a.points - 2;
    let expected = binomial_sum(m + 1, 3, a.weight + 1);
    let p = Params::new().with("weight", a.weight).with("points", a.points).with("guard-limit", cli.guard_limit);
    let key = CacheKey { weight: a.weight, points: a.points };
    let cache = BasisCache::from_flag_or_env(cli.cache_dir.as_deref());
    let cached = match &cache {
        Some(c) => c.load(key)?,
        None => None,
    };
    let space = match cached {
        Some(s) => s,
        None => match cl_space(a.weight, a.points, cli.guard_limit) {
            Ok(s) => {
                if let Some(c) = &cache {
                    c.store(key, &s)?;
                }
                s
            }
            Err(ClusterError::TooLarge { needed, limit }) => {
                rep.emit("dim-cl", &p, Verdict::TooLarge, expected.to_string(), format!("estimated {needed} > {limit}"), t)?;
                return Ok(Ok(()));
            }
            Err(ClusterError::Unsupported { .. }) => {
                rep.emit("dim-cl", &p, Verdict::TooLarge, expected.to_string(), "outside the supported range".into(), t)?;
                return Ok(Ok(()));
            }
            Err(e) => return Err(e.into()),
        },
    };
    let d = space.rank();
    rep.emit("dim-cl", &p, verdict(d == expected), expected.to_string(), d.to_string(), t)?;
    Ok(Ok(()))
}

fn gangl(rep: &mut Reporter, weight: usize) -> Res {
    let suite = format!("verify-gangl{weight}");
    let t = Instant::now();
    match gangl_suite(weight) {
        Ok(r) => {
            for s in &r.steps {
                let p = Params::new()
                    .with("step", &s.step_id)
                    .with("claim_hash", &s.claim_hash)
                    .with("ledger_entries_used", format!("{:?}", s.ledger_entries_used))
                    .with("instances", s.instances.len());
                rep.check(&suite, &p, s.verdict, s.verdict.to_string(), t)?;
            }
            let p = Params::new().with("steps", r.steps.len()).with("ledger_entries", r.ledger.len());
            rep.check(&suite, &p, r.passed(), r.passed().to_string(), t)?;
        }
        Err(e) => {
            rep.emit(&suite, &Params::new(), Verdict::Fail, "pass".into(), summarize(&e.to_string()), t)?;
        }
    }
    Ok(())
}

fn zagier(rep: &mut Reporter) -> Res {
    let t = Instant::now();
    let computed = match zagier_configuration_symbol() {
        Ok(s) if s.is_zero() => "0".to_string(),
        Ok(s) => format!("nonzero symbol, {} terms", s.normal_form().len()),
        Err(e) => summarize(&e.to_string()),
    };
    rep.emit("zagier-configuration", &Params::new(), Verdict::Info, "0".into(), computed, t)?;
    Ok(())
}

fn cache(cli: &Cli, rep: &mut Reporter, action: CacheAction) -> Result<Result<(), Usage>, Box<dyn std::error::Error>> {
    let Some(c) = BasisCache::from_flag_or_env(cli.cache_dir.as_deref()) else {
        return Ok(Err(Usage(format!("no cache directory: pass --cache-dir or set {}", polylie::cache::CACHE_ENV))));
    };
    let t = Instant::now();
    let dir = c.dir().display().to_string();
    match action {
        CacheAction::List => {
            let files = c.list()?;
            let names: Vec<String> = files.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect();
            let p = Params::new().with("action", "list").with("cache-dir", &dir);
            rep.emit("cache", &p, Verdict::Pass, String::new(), names.join(","), t)?;
        }
        CacheAction::Clear => {
            let n = c.clear()?;
            let p = Params::new().with("action", "clear").with("cache-dir", &dir);
            rep.emit("cache", &p, Verdict::Pass, String::new(), format!("removed {n}"), t)?;
        }
        CacheAction::Verify => {
            for st in c.verify()? {
                let name = st.path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let p = Params::new().with("action", "verify").with("cache-dir", &dir).with("entry", name);
                rep.check("cache", &p, st.ok, st.message, t)?;
            }
        }
    }
    Ok(Ok(()))
}
