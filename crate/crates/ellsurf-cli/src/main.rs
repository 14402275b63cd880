//! Command-line driver: surface analysis, reduction checks, point counting
//! with a persistent trace cache, Frobenius characteristic polynomials,
//! Picard and Artin-Tate rank bounds, Mordell-Weil lattice reports and the
//! Pythagorean-triple search.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use ellsurf_cli::cache::FileTraceCache;
use ellsurf_cli::pipeline::{self, AssemblyMember, RankMethod};
use ellsurf_cli::report::{emit, Emit};
use ellsurf_cli::spec::{load_spec, split_top_level};
use ellsurf_core::counting::Strategy;

#[derive(Parser)]
#[command(name = "ellsurf", version, about = "Mordell-Weil rank bounds for elliptic surfaces over function fields by exact point counting")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format
    #[arg(long, global = true, default_value = "text")]
    emit: String,
    /// Worker threads for the counting stage
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Counting strategy: char-sum, bsgs or auto
    #[arg(long, global = true, default_value = "auto")]
    strategy: String,
    /// Trace cache directory
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Kodaira fiber table and surface invariants over Q(t)
    Fibers { spec: PathBuf },
    /// Verify good reduction at a prime
    Reduce {
        spec: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Count surface points over F_{q^m} up to the configured depth
    Count {
        spec: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Characteristic polynomial of Frobenius on H^2
    Charpoly {
        spec: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Picard bound and Shioda-Tate rank from cyclotomic eigenvalues
    Picard {
        spec: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Artin-Tate discriminant classes at the spec's primes
    ArtinTate { spec: PathBuf },
    /// Height pairings, descent images, saturation, torsion, Galois descent
    Heights { spec: PathBuf },
    /// Assemble ranks across twists and base changes
    Assemble { assembly: PathBuf },
    /// Pythagorean-triple search over a (p, q) box
    Triples {
        #[arg(long, default_value_t = 6)]
        pmax: i64,
        #[arg(long, default_value_t = 6)]
        qmax: i64,
    },
    /// Trace cache maintenance
    Cache {
        action: String,
        spec: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    let how: Emit = cli.emit.parse().unwrap_or(Emit::Text);
    let strategy = match cli.strategy.as_str() {
        "char-sum" => Strategy::CharSum,
        "bsgs" => Strategy::Bsgs,
        _ => Strategy::default(),
    };
    let code = run(cli, how, strategy);
    std::process::exit(code);
}

fn run(cli: Cli, how: Emit, strategy: Strategy) -> i32 {
    let cache_dir = cli.cache_dir.as_deref();
    let threads = cli.threads.max(1);
    let result: Result<String, String> = (|| {
        match &cli.command {
            Cmd::Fibers { spec } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let rep = pipeline::fibers_report(&spec).map_err(|e| e.to_string())?;
                Ok(emit(&rep, how))
            }
            Cmd::Reduce { spec, prime } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let p = prime
                    .or_else(|| spec.primes.first().copied())
                    .ok_or("no prime given")?;
                let rep = pipeline::reduce_report(&spec, p).map_err(|e| e.to_string())?;
                Ok(emit(&rep, how))
            }
            Cmd::Count { spec, prime, depth } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let p = prime
                    .or_else(|| spec.primes.first().copied())
                    .ok_or("no prime given")?;
                let d = depth.unwrap_or(spec.depth);
                let out = pipeline::count_stage(&spec, p, d, strategy, threads, cache_dir)
                    .map_err(|e| e.to_string())?;
                Ok(emit(&out.report, how))
            }
            Cmd::Charpoly { spec, prime, depth } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let p = prime
                    .or_else(|| spec.primes.first().copied())
                    .ok_or("no prime given")?;
                let d = depth.unwrap_or(spec.depth);
                let out = pipeline::charpoly_stage(&spec, p, d, strategy, threads, cache_dir)
                    .map_err(|e| e.to_string())?;
                Ok(emit(&out.report, how))
            }
            Cmd::Picard { spec, prime, depth } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let p = prime
                    .or_else(|| spec.primes.first().copied())
                    .ok_or("no prime given")?;
                let d = depth.unwrap_or(spec.depth);
                let rep = pipeline::picard_stage(&spec, p, d, strategy, threads, cache_dir)
                    .map_err(|e| e.to_string())?;
                Ok(emit(&rep, how))
            }
            Cmd::ArtinTate { spec } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let rep = pipeline::artin_tate_stage(&spec, strategy, threads, cache_dir)
                    .map_err(|e| e.to_string())?;
                Ok(emit(&rep, how))
            }
            Cmd::Heights { spec } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let rep = pipeline::heights_stage(&spec).map_err(|e| e.to_string())?;
                Ok(emit(&rep, how))
            }
            Cmd::Assemble { assembly } => {
                let members = load_assembly(assembly)?;
                let rep = pipeline::assemble_ranks(members, strategy, threads, cache_dir)
                    .map_err(|e| e.to_string())?;
                Ok(emit(&rep, how))
            }
            Cmd::Triples { pmax, qmax } => {
                let rows = ellsurf_cli::triples::triples_rows(*pmax, *qmax);
                Ok(emit(&rows, how))
            }
            Cmd::Cache {
                action,
                spec,
                prime,
            } => {
                let spec = load_spec(spec).map_err(|e| e.to_string())?;
                let p = prime
                    .or_else(|| spec.primes.first().copied())
                    .ok_or("no prime given")?;
                let dir = cache_dir.ok_or("cache commands need --cache-dir")?;
                cache_command(action, &spec, p, dir, strategy)
            }
        }
    })();
    match result {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn cache_command(
    action: &str,
    spec: &ellsurf_cli::spec::SurfaceSpec,
    p: u64,
    dir: &std::path::Path,
    strategy: Strategy,
) -> Result<String, String> {
    let key = pipeline::model_cache_key(spec);
    let mut cache =
        FileTraceCache::open(dir, &key, p, spec.base_degree).map_err(|e| e.to_string())?;
    match action {
        "stats" => {
            let mut out = String::new();
            out.push_str(&format!("entries = {}\n", cache.len()));
            for (level, n) in cache.stats_by_level() {
                out.push_str(&format!("level {level} = {n}\n"));
            }
            if cache.quarantined {
                out.push_str("note = a corrupted cache file was quarantined\n");
            }
            Ok(out)
        }
        "clear" => {
            cache.clear().map_err(|e| e.to_string())?;
            Ok("cleared\n".into())
        }
        "audit" => {
            let reduced = pipeline::reduce_surface(spec, p).map_err(|e| e.to_string())?;
            let sample = cache.audit_sample(1);
            let mut checked = 0usize;
            let mut bad = 0usize;
            let mut level_cache: Option<(usize, ellsurf_core::counting::Level)> = None;
            for (d, rep, stored) in sample {
                let level = match &level_cache {
                    Some((ld, lv)) if *ld == d => lv,
                    _ => {
                        level_cache =
                            Some((d, ellsurf_core::counting::Level::build(&reduced.counting, d)));
                        &level_cache.as_ref().unwrap().1
                    }
                };
                let fresh = ellsurf_core::counting::orbit_trace(level, rep, strategy);
                checked += 1;
                if fresh != stored {
                    bad += 1;
                }
            }
            if bad > 0 {
                cache.clear().map_err(|e| e.to_string())?;
                Err(format!(
                    "audit failed: {bad}/{checked} mismatches; cache cleared"
                ))
            } else {
                Ok(format!("audit passed: {checked} entries recomputed\n"))
            }
        }
        other => Err(format!("unknown cache action '{other}'")),
    }
}

fn load_assembly(path: &std::path::Path) -> Result<Vec<AssemblyMember>, String> {
    let src = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let dir = path.parent().unwrap_or(std::path::Path::new("."));
    let mut members = Vec::new();
    for raw in src.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(rest) = line.strip_prefix("member") else {
            continue;
        };
        // member = <name> : <method> : <path>
        let parts: Vec<&str> = split_top_level(rest.trim_start_matches('=').trim(), ':')
            .into_iter()
            .map(str::trim)
            .collect();
        if parts.len() != 3 {
            return Err(format!("assembly line '{line}' needs name : method : path"));
        }
        let name = parts[0].to_string();
        let method = parse_method(parts[1])?;
        let spec = load_spec(&dir.join(parts[2])).map_err(|e| e.to_string())?;
        members.push(AssemblyMember { name, spec, method });
    }
    if members.is_empty() {
        return Err("assembly file declares no members".into());
    }
    Ok(members)
}

fn parse_method(s: &str) -> Result<RankMethod, String> {
    let words: Vec<&str> = s.split_whitespace().collect();
    match words.as_slice() {
        ["heights"] => Ok(RankMethod::Heights),
        ["picard"] => Ok(RankMethod::Picard),
        ["artin-tate"] => Ok(RankMethod::ArtinTate),
        ["rational-shioda"] => Ok(RankMethod::RationalShioda),
        ["pullback", base, phi, "twin", twin] => Ok(RankMethod::Pullback {
            base: base.to_string(),
            phi: phi.to_string(),
            twin: twin.to_string(),
        }),
        _ => Err(format!("unknown rank method '{s}'")),
    }
}
