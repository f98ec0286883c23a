//! Command-line surface. Exit codes are a stable contract: 0 success,
//! 1 verification or runtime failure, 2 usage or configuration errors.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tablestack_graphgen::{degree_distribution, generate, write_edge_list, GeneratorConfig};

use crate::config::BenchmarkConfig;
use crate::report::{
    load_config, throughput_csv, write_json, RunManifest, ScalingCurve, ScalingPoint,
    MANIFEST_FILE, REPORT_FILE, SCALING_FILE, SWEEP_SUMMARY_FILE, THROUGHPUT_FILE,
};
use crate::runner::run_benchmark;
use crate::verify::verify_ingest;

#[derive(Parser)]
#[command(
    name = "tablestack",
    version,
    about = "Power-law graph ingest benchmark over a simulated range-partitioned store"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a power-law edge-list file
    Generate(GenerateArgs),
    /// Run the ingest benchmark and write manifest, report, and throughput
    Bench(BenchArgs),
    /// Run the benchmark over several (servers, ingest) pairs
    Sweep(SweepArgs),
    /// Re-run a configuration and verify the ingested table
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Graph size: 2^scale vertices, 8*2^scale edges
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=40))]
    scale: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output edge-list file
    #[arg(long)]
    out: PathBuf,
}

/// Config resolution shared by bench, sweep, and verify: values come from
/// `--config` (a flat config file or a run manifest) and flags override.
#[derive(Args, Clone)]
struct ConfigArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    servers: Option<usize>,
    /// Ingest workers per server
    #[arg(long)]
    ingest: Option<usize>,
    /// Tablets per worker
    #[arg(long)]
    tablets: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=40))]
    scale: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write-ahead log on the insert path
    #[arg(long, value_parser = parse_on_off)]
    walog: Option<bool>,
    /// Splits the balancer migrates per simulated second
    #[arg(long = "balancer-rate")]
    balancer_rate: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Run directory for manifest.json, report.json, throughput.csv
    #[arg(long, default_value = "tablestack-out")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated (servers)x(ingest) pairs, e.g. 1x1,2x1,2x2
    #[arg(long)]
    pairs: String,
    #[command(flatten)]
    config: ConfigArgs,
    /// Directory for per-run outputs and scaling.csv
    #[arg(long, default_value = "tablestack-out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    config: ConfigArgs,
}

enum CliOutcome {
    Success,
    VerificationFailed(String),
    Usage(String),
    Runtime(String),
}

impl CliOutcome {
    fn code(&self) -> i32 {
        match self {
            CliOutcome::Success => 0,
            CliOutcome::VerificationFailed(_) | CliOutcome::Runtime(_) => 1,
            CliOutcome::Usage(_) => 2,
        }
    }
}

fn parse_on_off(value: &str) -> Result<bool, String> {
    match value {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(format!("expected `on` or `off`, got {other:?}")),
    }
}

fn resolve_config(args: &ConfigArgs) -> Result<BenchmarkConfig, CliOutcome> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)
            .map_err(|e| CliOutcome::Usage(format!("cannot load config {path:?}: {e}")))?,
        None => BenchmarkConfig::default(),
    };
    if let Some(v) = args.servers {
        cfg.n_server = v;
    }
    if let Some(v) = args.ingest {
        cfg.n_ingest = v;
    }
    if let Some(v) = args.tablets {
        cfg.n_tablet = v;
    }
    if let Some(v) = args.scale {
        cfg.scale = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.walog {
        cfg.store.walog_enabled = v;
    }
    if let Some(v) = args.balancer_rate {
        cfg.store.balancer_rate = v;
    }
    cfg.validate()
        .map_err(|e| CliOutcome::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Parses and runs the process args; returns the process exit code.
pub fn run() -> i32 {
    // Clap prints its own usage message and exits with code 2 on bad flags.
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match &outcome {
        CliOutcome::Success => {}
        CliOutcome::VerificationFailed(msg) => eprintln!("verification failed: {msg}"),
        CliOutcome::Usage(msg) => eprintln!("error: {msg}"),
        CliOutcome::Runtime(msg) => eprintln!("error: {msg}"),
    }
    outcome.code()
}

fn cmd_generate(args: &GenerateArgs) -> CliOutcome {
    let cfg = GeneratorConfig::new(args.scale, args.seed);
    let edges = match generate(&cfg) {
        Ok(e) => e,
        Err(e) => return CliOutcome::Usage(e.to_string()),
    };
    let write = || -> std::io::Result<()> {
        let mut out = BufWriter::new(File::create(&args.out)?);
        write_edge_list(&mut out, &edges).map_err(std::io::Error::other)?;
        out.flush()
    };
    if let Err(e) = write() {
        return CliOutcome::Runtime(format!("cannot write {:?}: {e}", args.out));
    }
    println!("N={} M={}", edges.n_vertices, edges.edges.len());
    CliOutcome::Success
}

fn run_and_verify(cfg: &BenchmarkConfig, run_dir: &Path) -> Result<(ScalingPoint, bool), CliOutcome> {
    fs::create_dir_all(run_dir)
        .map_err(|e| CliOutcome::Runtime(format!("cannot create {run_dir:?}: {e}")))?;
    let manifest = RunManifest::new(cfg.clone());
    write_json(&run_dir.join(MANIFEST_FILE), &manifest)
        .map_err(|e| CliOutcome::Runtime(e.to_string()))?;

    let output = run_benchmark(cfg, run_dir).map_err(|e| CliOutcome::Runtime(e.to_string()))?;
    write_json(&run_dir.join(REPORT_FILE), &output.report)
        .map_err(|e| CliOutcome::Runtime(e.to_string()))?;
    fs::write(
        run_dir.join(THROUGHPUT_FILE),
        throughput_csv(&output.report.throughput, cfg.store.averaging_window_secs),
    )
    .map_err(|e| CliOutcome::Runtime(e.to_string()))?;

    let verification = verify_ingest(&output.store, &output.table, cfg)
        .map_err(|e| CliOutcome::Runtime(e.to_string()))?;
    for c in &verification.checks {
        println!(
            "{}: {} ({})",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    let point = ScalingPoint {
        n_server: cfg.n_server,
        n_ingest: cfg.n_ingest,
        n_p: cfg.n_workers(),
        aggregate_entries_per_sec: output.report.aggregate_entries_per_sec,
        per_worker_entries_per_sec: output.report.per_worker_mean_entries_per_sec,
    };
    match verification.first_failure() {
        None => Ok((point, true)),
        Some(f) => {
            eprintln!("failing check: {} ({})", f.name, f.detail);
            Ok((point, false))
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> CliOutcome {
    let cfg = match resolve_config(&args.config) {
        Ok(c) => c,
        Err(o) => return o,
    };
    match run_and_verify(&cfg, &args.out) {
        Ok((point, true)) => {
            println!(
                "total={} aggregate_rate={:.0}/s per_worker_rate={:.0}/s",
                point.n_p, point.aggregate_entries_per_sec, point.per_worker_entries_per_sec
            );
            CliOutcome::Success
        }
        Ok((_, false)) => CliOutcome::VerificationFailed("see failing check above".into()),
        Err(o) => o,
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut pairs = Vec::new();
    for part in text.split(',').filter(|p| !p.is_empty()) {
        let (s, i) = part
            .split_once('x')
            .ok_or_else(|| format!("pair {part:?} is not of the form SERVERSxINGEST"))?;
        let s = s.parse().map_err(|_| format!("bad server count in {part:?}"))?;
        let i = i.parse().map_err(|_| format!("bad ingest count in {part:?}"))?;
        pairs.push((s, i));
    }
    if pairs.is_empty() {
        return Err("at least one SERVERSxINGEST pair is required".into());
    }
    Ok(pairs)
}

fn cmd_sweep(args: &SweepArgs) -> CliOutcome {
    let pairs = match parse_pairs(&args.pairs) {
        Ok(p) => p,
        Err(e) => return CliOutcome::Usage(e),
    };
    let base = match resolve_config(&args.config) {
        Ok(c) => c,
        Err(o) => return o,
    };

    let mut curve = ScalingCurve::default();
    for (n_server, n_ingest) in pairs {
        let cfg = BenchmarkConfig {
            n_server,
            n_ingest,
            ..base.clone()
        };
        if let Err(o) = cfg.validate().map_err(|e| CliOutcome::Usage(e.to_string())) {
            return o;
        }
        println!("== {n_server} servers x {n_ingest} ingest ==");
        let run_dir = args.out.join(format!("run_{n_server}x{n_ingest}"));
        match run_and_verify(&cfg, &run_dir) {
            Ok((point, true)) => curve.points.push(point),
            Ok((_, false)) => {
                return CliOutcome::VerificationFailed(format!(
                    "sweep aborted at {n_server}x{n_ingest}"
                ))
            }
            Err(o) => return o,
        }
    }
    curve.sort();

    if let Err(e) = fs::write(args.out.join(SCALING_FILE), curve.to_csv()) {
        return CliOutcome::Runtime(e.to_string());
    }
    let summary = curve.summary().expect("sweep has at least one point");
    if let Err(e) = write_json(&args.out.join(SWEEP_SUMMARY_FILE), &summary) {
        return CliOutcome::Runtime(e.to_string());
    }
    for p in &curve.points {
        println!(
            "{}x{} n_p={} aggregate={:.0}/s per_worker={:.0}/s",
            p.n_server, p.n_ingest, p.n_p, p.aggregate_entries_per_sec, p.per_worker_entries_per_sec
        );
    }
    println!(
        "linear={} dispersion={:.3}",
        summary.linear, summary.dispersion
    );
    CliOutcome::Success
}

fn cmd_verify(args: &VerifyArgs) -> CliOutcome {
    let cfg = match resolve_config(&args.config) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let scratch = std::env::temp_dir().join(format!(
        "tablestack-verify-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0)
    ));
    if let Err(e) = fs::create_dir_all(&scratch) {
        return CliOutcome::Runtime(format!("cannot create scratch dir: {e}"));
    }

    let result = (|| -> Result<bool, CliOutcome> {
        let output =
            run_benchmark(&cfg, &scratch).map_err(|e| CliOutcome::Runtime(e.to_string()))?;
        let verification = verify_ingest(&output.store, &output.table, &cfg)
            .map_err(|e| CliOutcome::Runtime(e.to_string()))?;
        let mut all = verification.passed();
        for c in &verification.checks {
            println!(
                "{}: {} ({})",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            );
        }

        // Degree-distribution shape of the worker-0 base graph; only
        // meaningful above desk scales.
        if cfg.scale >= 14 {
            let stats = generate(&cfg.generator_config(0))
                .and_then(|e| degree_distribution(&e))
                .map_err(|e| CliOutcome::Runtime(e.to_string()))?;
            let skewed =
                stats.fitted_slope < 0.0 && stats.max_degree() > 50 * stats.median_degree();
            println!(
                "degree_distribution: {} (slope {:.3}, max/median {}/{})",
                if skewed { "PASS" } else { "FAIL" },
                stats.fitted_slope,
                stats.max_degree(),
                stats.median_degree()
            );
            all &= skewed;
        } else {
            println!("degree_distribution: skipped (scale too small)");
        }
        Ok(all)
    })();

    let _ = fs::remove_dir_all(&scratch);
    match result {
        Ok(true) => CliOutcome::Success,
        Ok(false) => CliOutcome::VerificationFailed("one or more checks failed".into()),
        Err(o) => o,
    }
}
