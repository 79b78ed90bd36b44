use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hforge::cache::{resolve_cache_path, CacheFile};
use hforge::elsv::{hurwitz_elsv, hurwitz_genus0_closed, hurwitz_genus1_closed, one_point_series_lhs};
use hforge::extract::{build_tables, unknowns_for, DEFAULT_BLOCKS, GENUS3_BLOCKS};
use hforge::intersection::{is_stable, CorrelatorKey, CorrelatorTable, IntersectionEngine};
use hforge::numeric::{series_sin_kernel, series_sinh_kernel, Profile, Rational};
use hforge::oracle::{Oracle, OracleMethod, SearchOptions, DEFAULT_NODE_BUDGET};
use hforge::verify::{all_passed, Suite, VerifyConfig, Verifier};
use hforge::Error;

#[derive(Parser)]
#[command(name = "hforge", version, about = "Exact Hurwitz numbers and Hodge integrals")]
struct Cli {
    /// Directory holding the Hodge table cache.
    #[arg(long, global = true, env = "HFORGE_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Abort depth-first searches after this many nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,

    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Factorization counter (default: dfs for queries, frobenius for table builds).
    #[arg(long, global = true, value_enum)]
    oracle: Option<OracleArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Dfs,
    Frobenius,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Elsv,
    Closed,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Hurwitz number h_{g;k}.
    Hurwitz {
        #[arg(long)]
        genus: u32,
        /// Pole orders, comma separated.
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum, default_value = "oracle")]
        method: Method,
    },
    /// Pure ψ intersection number.
    Tau {
        #[arg(long)]
        genus: u32,
        /// ψ exponents, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Hodge integrals of one (g, n) block.
    Hodge {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: usize,
        /// Re-extract the tables and overwrite the cache.
        #[arg(long)]
        rebuild: bool,
        /// Include genus three in a rebuild.
        #[arg(long)]
        genus3: bool,
    },
    /// One-point series against the sin and sinh kernels.
    Series {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Run a self-check suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidProfile(_)
            | Error::InvalidArgument(_)
            | Error::NegativeExponent
            | Error::UnstableKey { .. } => 2,
            Error::SearchTooLarge { .. } => 3,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

struct Context {
    cache_path: PathBuf,
    search: SearchOptions,
    oracle: Option<OracleMethod>,
}

impl Context {
    fn oracle(&self, default: OracleMethod) -> Oracle {
        Oracle {
            method: self.oracle.unwrap_or(default),
            options: self.search.clone(),
        }
    }

    /// Extracted entries from the cache; an absent file is an empty table.
    fn table(&self) -> Result<CorrelatorTable, Failure> {
        if !self.cache_path.exists() {
            return Ok(CorrelatorTable::new());
        }
        CacheFile::read(&self.cache_path).map(|c| c.table).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", self.cache_path.display()),
        })
    }

    fn engine(&self) -> Result<IntersectionEngine, Failure> {
        Ok(IntersectionEngine::with_table(self.table()?))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cx = Context {
        cache_path: resolve_cache_path(cli.cache_dir.as_deref()),
        search: SearchOptions {
            node_budget: cli.node_budget,
            threads: cli.threads.max(1),
        },
        oracle: cli.oracle.map(|o| match o {
            OracleArg::Dfs => OracleMethod::Dfs,
            OracleArg::Frobenius => OracleMethod::Frobenius,
        }),
    };
    let outcome = match cli.command {
        Command::Hurwitz { genus, profile, method } => hurwitz(&cx, genus, &profile, method),
        Command::Tau { genus, m } => tau(genus, &m),
        Command::Hodge { genus, n, rebuild, genus3 } => hodge(&cx, genus, n, rebuild, genus3),
        Command::Series { k, order } => series(&cx, k, order),
        Command::Verify { suite } => verify(&cx, &suite),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn hurwitz(cx: &Context, genus: u32, profile: &str, method: Method) -> Outcome {
    let profile: Profile = profile.parse()?;
    let closed = |genus: u32| -> Result<Rational, Failure> {
        match genus {
            0 => Ok(hurwitz_genus0_closed(&profile)),
            1 => Ok(hurwitz_genus1_closed(&profile)),
            g => Err(usage(format!("no closed formula in genus {g}"))),
        }
    };
    let elsv = || -> Result<Rational, Failure> {
        let mut engine = cx.engine()?;
        Ok(hurwitz_elsv(&mut engine, genus, &profile)?)
    };
    let oracle = || -> Result<Rational, Failure> { Ok(cx.oracle(OracleMethod::Dfs).hurwitz(genus, &profile)?) };

    match method {
        Method::Oracle => println!("h = {}", oracle()?),
        Method::Elsv => println!("h = {}", elsv()?),
        Method::Closed => println!("h = {}", closed(genus)?),
        Method::All => {
            let mut values = vec![("oracle", oracle()?)];
            if genus <= 1 {
                values.push(("closed", closed(genus)?));
            }
            values.push(("elsv", elsv()?));
            for (name, v) in &values {
                println!("{name}: h = {v}");
            }
            if values.iter().all(|(_, v)| *v == values[0].1) {
                println!("AGREE");
            } else {
                println!("DISAGREE");
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn parse_exponents(list: &str) -> Result<Vec<i64>, Failure> {
    list.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| usage(format!("bad exponent `{s}` in `{list}`"))))
        .collect()
}

fn tau(genus: u32, m: &str) -> Outcome {
    let exps = parse_exponents(m)?;
    if exps.iter().any(|&e| e < 0) {
        return Err(Error::NegativeExponent.into());
    }
    if !is_stable(genus, exps.len()) {
        println!("0 [vanishes: unstable]");
        return Ok(0);
    }
    let key = CorrelatorKey::from_signed(genus, &exps, 0)?;
    if !key.satisfies_dimension_gate() {
        println!("0 [vanishes: dimension]");
        return Ok(0);
    }
    let mut engine = IntersectionEngine::new();
    println!("{}", engine.psi_intersection(genus, key.exponents())?);
    Ok(0)
}

fn hodge(cx: &Context, genus: u32, n: usize, rebuild: bool, genus3: bool) -> Outcome {
    if !is_stable(genus, n) {
        println!("0 [vanishes: unstable]");
        return Ok(0);
    }
    if rebuild {
        rebuild_cache(cx, genus3)?;
    }
    let mut engine = cx.engine()?;
    for key in unknowns_for(genus, n)? {
        let v = engine.hodge_integral(&key)?;
        let m: Vec<String> = key.exponents().iter().map(u32::to_string).collect();
        println!("i={} m={} {v}", key.lambda(), m.join(","));
    }
    Ok(0)
}

fn rebuild_cache(cx: &Context, genus3: bool) -> Result<(), Failure> {
    let mut blocks = DEFAULT_BLOCKS.to_vec();
    if genus3 {
        blocks.extend_from_slice(GENUS3_BLOCKS);
    }
    let built = build_tables(&blocks, &cx.oracle(OracleMethod::Frobenius))?;
    for report in &built.holdouts {
        eprintln!("{}", report.to_string().trim_end());
    }
    let file = CacheFile::from(&built);
    file.write_atomic(&cx.cache_path)?;
    eprintln!("wrote {} entries to {}", file.table.len(), cx.cache_path.display());
    Ok(())
}

fn series(cx: &Context, k: u32, order: u32) -> Outcome {
    if order % 2 == 1 {
        return Err(usage("--order must be even"));
    }
    let mut engine = cx.engine()?;
    let lhs = one_point_series_lhs(&mut engine, k, order / 2)?;
    let sin = series_sin_kernel(k + 1, order)?;
    let sinh = series_sinh_kernel(k + 1, order)?;
    let mark = |a: &Rational, b: &Rational| if a == b { "=" } else { "≠" };
    println!("{:<6} {:<14} {:<16} {:<16}", "term", "lhs", "sin", "sinh");
    for j in 0..=order / 2 {
        let e = 2 * j;
        let (l, s, h) = (lhs.coeff(e), sin.coeff(e), sinh.coeff(e));
        println!(
            "{:<6} {:<14} {:<16} {:<16}",
            format!("t^{e}"),
            l.to_string(),
            format!("{} {s}", mark(&l, &s)),
            format!("{} {h}", mark(&l, &h)),
        );
    }
    let sin_ok = lhs == sin;
    println!("sin kernel: {}", if sin_ok { "MATCH" } else { "MISMATCH" });
    println!("sinh kernel: {}", if lhs == sinh { "MATCH" } else { "MISMATCH" });
    Ok(if sin_ok { 0 } else { 1 })
}

fn verify(cx: &Context, suite: &str) -> Outcome {
    let suite: Suite = suite.parse()?;
    let mut verifier = Verifier::new(VerifyConfig {
        search: cx.search.clone(),
        cache_path: Some(cx.cache_path.clone()),
        ..VerifyConfig::default()
    });
    let checks = verifier.run(suite);
    for c in &checks {
        println!("{c}");
    }
    let ok = all_passed(&checks);
    println!("{}", if ok { "ALL PASS" } else { "FAILURES" });
    Ok(if ok { 0 } else { 1 })
}

