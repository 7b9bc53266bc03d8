use std::path::{Path, PathBuf};
use std::process::ExitCode;

use census_core::canon;
use census_core::chaos::DEFAULT_DIRECT_LIMIT;
use census_core::covering::SetCollection;
use census_core::enumerate::{passes, DegreeMode, Filter, Limits, ModeKind, MuTable};
use census_core::partitions::{meinardus_asymptotic, PartitionTable};
use chaos_census::error::{CensusError, Result};
use chaos_census::experiments::{self, ExperimentConfig};
use chaos_census::parallel::{
    enumerate_parallel, fill_table, moment_combinatorial_parallel, moment_direct_parallel,
    with_threads,
};
use chaos_census::provenance::Provenance;
use chaos_census::verify::{self, Context};
use chaos_census::{cache, dot, formats};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "chaos-census", version, about = "Census of double-coverings and Rademacher chaos moments")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Node budget for one enumeration.
    #[arg(long, global = true, default_value_t = Limits::default().work_limit)]
    work_limit: u64,
    #[arg(long, global = true, default_value_t = Limits::default().vertex_limit)]
    vertex_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    Full,
    Standard,
    Connected,
    All,
}

impl FilterArg {
    fn filters(self) -> Vec<Filter> {
        match self {
            FilterArg::Full => vec![Filter::Full],
            FilterArg::Standard => vec![Filter::Standard],
            FilterArg::Connected => vec![Filter::Connected],
            FilterArg::All => Filter::ALL.to_vec(),
        }
    }
}

#[derive(Args, Debug)]
struct CacheArgs {
    /// Cache file; `$CHAOS_CENSUS_CACHE` or mu-cache.json by default.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
}

impl CacheArgs {
    fn path(&self) -> Option<PathBuf> {
        if self.no_cache {
            None
        } else {
            Some(self.cache.clone().unwrap_or_else(cache::default_path))
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate mu_{l,p} over a range of p.
    Mu {
        #[arg(long)]
        l: u32,
        /// `a..b` (inclusive) or a single value.
        #[arg(long, value_parser = parse_range)]
        p: (u32, u32),
        #[arg(long, default_value = "exact")]
        mode: ModeKind,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        /// Compare l = 2 exact full counts with nu(p) - nu(p-1).
        #[arg(long)]
        check_b1: bool,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// List canonical representatives of one cell.
    Enumerate {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = "exact")]
        mode: ModeKind,
        #[arg(long, value_enum, default_value_t = FilterArg::Full)]
        filter: FilterArg,
        /// Write one DOT file per class into this directory.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the per-suite trial count of randomized suites.
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Open-problem probes, reported as observations.
    Experiments {
        #[arg(long, default_value_t = ExperimentConfig::default().probe_m)]
        probe_m: u32,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// nu(n) against the Hardy-Ramanujan asymptotic.
    Partitions {
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
    },
    /// Exact moment E f^p of a chaos read from a coefficient file.
    Moment {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// Canonical codes and orbit data for collections (one JSON per line).
    Canon {
        #[arg(long)]
        input: PathBuf,
    },
    /// Inspect or reset the mu cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
        #[command(flatten)]
        cache: CacheArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Combinatorial,
    Both,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    Show,
    Check,
    Clear,
}

fn parse_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let bad = || format!("expected `a..b` or a number, got {s:?}");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    match with_threads(threads, || run(&cli)).and_then(|r| r) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 3 } else { 2 })
        }
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits {
        vertex_limit: cli.vertex_limit,
        work_limit: cli.work_limit,
    }
}

fn load_table(path: Option<&Path>) -> Result<MuTable> {
    let Some(path) = path else {
        return Ok(MuTable::new());
    };
    let loaded = cache::load(path)?;
    if loaded.unreadable {
        eprintln!("warning: {} is not a valid cache; recomputing", path.display());
    } else if loaded.rejected > 0 {
        eprintln!(
            "warning: {} cache records failed their checksum; recomputing",
            loaded.rejected
        );
    }
    Ok(loaded.table)
}

fn store_table(path: Option<&Path>, table: &MuTable) -> Result<()> {
    match path {
        Some(p) => cache::save(p, table),
        None => Ok(()),
    }
}

fn emit_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn emit_csv<S: Serialize>(rows: &[S]) -> Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for r in rows {
        w.serialize(r).map_err(|e| CensusError::Format(e.to_string()))?;
    }
    w.flush().map_err(|e| CensusError::io("<stdout>", e))
}

#[derive(Serialize)]
struct MuRow {
    l: u32,
    p: u32,
    mode: String,
    filter: String,
    value: String,
}

fn run(cli: &Cli) -> Result<Outcome> {
    let limits = limits(cli);
    match &cli.command {
        Command::Mu { l, p, mode, filter, check_b1, cache } => {
            let path = cache.path();
            let mut table = load_table(path.as_deref())?;
            let cells: Vec<(u32, DegreeMode)> =
                (p.0..=p.1).map(|p| (p, DegreeMode::new(*mode, *l))).collect();
            fill_table(&mut table, &cells, limits)?;
            store_table(path.as_deref(), &table)?;
            let mut rows = Vec::new();
            for pp in p.0..=p.1 {
                for f in filter.filters() {
                    let v = table.require(*l, pp, *mode, f)?;
                    rows.push(MuRow {
                        l: *l,
                        p: pp,
                        mode: mode.name().into(),
                        filter: f.name().into(),
                        value: v.to_string(),
                    });
                }
            }
            let mut failed = Vec::new();
            if *check_b1 {
                if *l != 2 || *mode != ModeKind::Exact {
                    return Err(CensusError::format("--check-b1 needs --l 2 --mode exact"));
                }
                let t = PartitionTable::new(p.1 as usize);
                for pp in p.0.max(2)..=p.1 {
                    let got = table.require(2, pp, ModeKind::Exact, Filter::Full)?;
                    let want = t.difference(pp as usize)?;
                    if *got != want {
                        failed.push(format!("p={pp}: mu = {got}, nu(p)-nu(p-1) = {want}"));
                    }
                }
            }
            match cli.format {
                Format::Json => emit_json(&json!({
                    "provenance": Provenance::new(None, limits),
                    "rows": rows,
                    "check_b1": check_b1.then(|| json!({"passed": failed.is_empty(), "failures": failed})),
                })),
                Format::Csv => emit_csv(&rows)?,
                Format::Text => {
                    for r in &rows {
                        println!("l={} p={} mode={} filter={} mu={}", r.l, r.p, r.mode, r.filter, r.value);
                    }
                    if *check_b1 {
                        println!("check-b1: {}", if failed.is_empty() { "PASS" } else { "FAIL" });
                    }
                }
            }
            for f in &failed {
                eprintln!("check-b1 failure: {f}");
            }
            Ok(if failed.is_empty() { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Enumerate { l, p, mode, filter, dot: dot_dir } => {
            let reps = enumerate_parallel(*p, DegreeMode::new(*mode, *l), limits)?;
            let filters = filter.filters();
            let mut kept = Vec::new();
            for r in reps {
                let mut ok = true;
                for f in &filters {
                    ok &= passes(&r.graph, *f)?;
                }
                if ok {
                    kept.push(r);
                }
            }
            if let Some(dir) = dot_dir {
                std::fs::create_dir_all(dir).map_err(|e| CensusError::io(dir, e))?;
                for (k, r) in kept.iter().enumerate() {
                    let name = format!("class_{k:04}");
                    let path = dir.join(format!("{name}.dot"));
                    std::fs::write(&path, dot::to_dot(&r.graph, &name))
                        .map_err(|e| CensusError::io(&path, e))?;
                }
            }
            #[derive(Serialize)]
            struct Row {
                index: usize,
                code: String,
                collection: String,
            }
            let rows = kept
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    Ok(Row {
                        index: k,
                        code: r.code.to_hex(),
                        collection: formats::collection_to_json(&SetCollection::from_multigraph(&r.graph)?),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match cli.format {
                Format::Json => emit_json(&json!({
                    "provenance": Provenance::new(None, limits),
                    "l": l, "p": p, "mode": mode.name(),
                    "filter": format!("{filter:?}").to_lowercase(),
                    "count": rows.len(),
                    "classes": rows,
                })),
                Format::Csv => emit_csv(&rows)?,
                Format::Text => {
                    for r in &rows {
                        println!("{} {} {}", r.index, r.code, r.collection);
                    }
                    println!("{} classes", rows.len());
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Verify { suite, seed, trials, cache } => {
            let path = cache.path();
            let mut ctx = Context::new(*seed, limits);
            ctx.trials = *trials;
            ctx.table = load_table(path.as_deref())?;
            let reports = verify::run(suite, &mut ctx)?;
            store_table(path.as_deref(), &ctx.table)?;
            let passed = reports.iter().all(|r| r.passed);
            match cli.format {
                Format::Json => emit_json(&json!({
                    "provenance": Provenance::new(Some(*seed), limits),
                    "passed": passed,
                    "suites": reports,
                })),
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        suite: &'a str,
                        passed: bool,
                        checks: u64,
                        failures: usize,
                    }
                    let rows: Vec<Row> = reports
                        .iter()
                        .map(|r| Row { suite: &r.suite, passed: r.passed, checks: r.checks, failures: r.failures.len() })
                        .collect();
                    emit_csv(&rows)?;
                }
                Format::Text => {
                    for r in &reports {
                        println!(
                            "{} {}: {} checks, {} failures",
                            if r.passed { "PASS" } else { "FAIL" },
                            r.suite,
                            r.checks,
                            r.failures.len()
                        );
                        for n in &r.notes {
                            println!("    {n}");
                        }
                        for f in r.failures.iter().take(20) {
                            println!("    failure: {f}");
                        }
                    }
                    let bad = reports.iter().filter(|r| !r.passed).count();
                    println!("{} suites, {} failed", reports.len(), bad);
                }
            }
            Ok(if passed { Outcome::Ok } else { Outcome::Failed })
        }
        Command::Experiments { probe_m, cache } => {
            let path = cache.path();
            let mut table = load_table(path.as_deref())?;
            let cfg = ExperimentConfig { probe_m: *probe_m, ..ExperimentConfig::default() };
            let rows = experiments::run(&cfg, &mut table, limits)?;
            store_table(path.as_deref(), &table)?;
            match cli.format {
                Format::Json => emit_json(&json!({
                    "provenance": Provenance::new(None, limits),
                    "observations": rows,
                })),
                Format::Csv => emit_csv(&rows)?,
                Format::Text => {
                    for r in &rows {
                        println!("[{}] {} l={} p={} {} = {}", r.label, r.topic, r.l, r.p, r.quantity, r.value);
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Partitions { n_max, step } => {
            let t = PartitionTable::new(*n_max);
            #[derive(Serialize)]
            struct Row {
                n: usize,
                nu: String,
                asymptotic: f64,
                ratio: f64,
            }
            let rows: Vec<Row> = (1..=*n_max)
                .step_by((*step).max(1))
                .map(|n| {
                    Ok(Row {
                        n,
                        nu: t.nu(n)?.to_string(),
                        asymptotic: meinardus_asymptotic(n as f64),
                        ratio: census_core::partitions::meinardus_ratio(&t, n)?,
                    })
                })
                .collect::<Result<_>>()?;
            match cli.format {
                Format::Json => emit_json(&json!({
                    "provenance": Provenance::new(None, limits),
                    "rows": rows,
                })),
                _ => emit_csv(&rows)?,
            }
            Ok(Outcome::Ok)
        }
        Command::Moment { coeffs, p, method } => {
            let text = std::fs::read_to_string(coeffs).map_err(|e| CensusError::io(coeffs, e))?;
            let b = formats::parse_coefficients(&text)?;
            let direct = match method {
                Method::Direct | Method::Both => Some(moment_direct_parallel(&b, *p, DEFAULT_DIRECT_LIMIT)?),
                Method::Combinatorial => None,
            };
            let comb = match method {
                Method::Combinatorial | Method::Both => Some(moment_combinatorial_parallel(&b, *p)?),
                Method::Direct => None,
            };
            let agree = match (&direct, &comb) {
                (Some(a), Some(c)) => a == c,
                _ => true,
            };
            let value = direct.as_ref().or(comb.as_ref()).expect("one method ran").to_string();
            match cli.format {
                Format::Json => emit_json(&json!({
                    "provenance": Provenance::new(None, limits),
                    "p": p,
                    "direct": direct.map(|x| x.to_string()),
                    "combinatorial": comb.map(|x| x.to_string()),
                    "agree": agree,
                })),
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        p: u32,
                        moment: &'a str,
                    }
                    emit_csv(&[Row { p: *p, moment: &value }])?
                }
                Format::Text => println!("E f^{p} = {value}"),
            }
            if !agree {
                eprintln!("direct and combinatorial moments disagree");
                return Ok(Outcome::Failed);
            }
            Ok(Outcome::Ok)
        }
        Command::Canon { input } => {
            let text = std::fs::read_to_string(input).map_err(|e| CensusError::io(input, e))?;
            #[derive(Serialize)]
            struct Row {
                collection: String,
                code: String,
                double_covering: bool,
                standard: Option<bool>,
                ground_aut: Option<String>,
                eclass_size: Option<String>,
            }
            let mut rows = Vec::new();
            for ing in formats::parse_collection_lines(&text)? {
                let c = &ing.collection;
                let double = c.is_double_covering();
                let (standard, aut, size) = if double {
                    let a = canon::ground_rearrangement_count(c)?.ground_aut;
                    (
                        Some(canon::is_standard(c)?),
                        Some(a.to_string()),
                        Some(canon::eclass_size(c)?.to_string()),
                    )
                } else {
                    (None, None, None)
                };
                rows.push(Row {
                    collection: formats::collection_to_json(c),
                    code: canon::collection_code(c)?.to_hex(),
                    double_covering: double,
                    standard,
                    ground_aut: aut,
                    eclass_size: size,
                });
            }
            match cli.format {
                Format::Json => emit_json(&json!({
                    "provenance": Provenance::new(None, limits),
                    "collections": rows,
                })),
                Format::Csv => emit_csv(&rows)?,
                Format::Text => {
                    for r in &rows {
                        println!("{} {}", r.code, r.collection);
                    }
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Cache { action, cache: args } => {
            let path = args.path().ok_or_else(|| CensusError::format("--no-cache makes no sense here"))?;
            match action {
                CacheAction::Show => {
                    let table = load_table(Some(&path))?;
                    let rows = cache::records(&table);
                    match cli.format {
                        Format::Json => emit_json(&serde_json::to_value(&rows)?),
                        Format::Csv => emit_csv(&rows)?,
                        Format::Text => {
                            for r in &rows {
                                println!("l={} p={} mode={} filter={} mu={}", r.l, r.p, r.mode, r.filter, r.value);
                            }
                        }
                    }
                    Ok(Outcome::Ok)
                }
                CacheAction::Check => {
                    let loaded = cache::load(&path)?;
                    println!(
                        "{}: {} entries, {} rejected{}",
                        path.display(),
                        loaded.table.len(),
                        loaded.rejected,
                        if loaded.unreadable { ", unreadable" } else { "" }
                    );
                    Ok(if loaded.rejected == 0 && !loaded.unreadable { Outcome::Ok } else { Outcome::Failed })
                }
                CacheAction::Clear => {
                    match std::fs::remove_file(&path) {
                        Ok(()) => {}
                        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                        Err(e) => return Err(CensusError::io(&path, e)),
                    }
                    Ok(Outcome::Ok)
                }
            }
        }
    }
}
