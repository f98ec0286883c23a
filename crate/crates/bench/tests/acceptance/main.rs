//! Acceptance suite: one test per criterion, every tolerance pinned in the
//! assertions, one PASS line printed per criterion (run with
//! `cargo test -p tablestack-bench --test acceptance -- --nocapture`).

mod assoc_oracle;

use std::collections::BTreeMap;
use std::fs;
use std::process::Command;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tablestack_assoc::{AssocArray, CollisionPolicy, Value};
use tablestack_bench::{
    load_config, run_benchmark, verify_ingest, write_json, BenchmarkConfig, RunManifest,
};
use tablestack_graphgen::{degree_distribution, generate, power_law_slope, GeneratorConfig};
use tablestack_store::{SimClock, StoreConfig, TabletStore, OPT_WALOG_ENABLED};

use assoc_oracle as oracle;

/// The criteria with timing assertions must not compete for cores, so every
/// test in this suite runs under one lock.
static SERIAL: std::sync::Mutex<()> = std::sync::Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(std::sync::PoisonError::into_inner)
}

fn pass(number: u8, name: &str) {
    println!("acceptance {number} ({name}): PASS");
}

#[test]
fn criterion_1_generator_sizing() {
    let _guard = serial();
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("g17.el");
    let started = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_tablestack"))
        .args(["generate", "--scale", "17", "--seed", "1"])
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("generator runs");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(output.status.success());
    assert!(
        elapsed < 30.0,
        "scale-17 generation took {elapsed:.1}s, limit is 30s"
    );

    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("N=131072 M=1048576"), "stdout: {stdout}");
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("131072 1048576"));
    assert_eq!(lines.count(), 1_048_576, "exactly M edge lines");
    pass(1, "generator sizing");
}

#[test]
fn criterion_2_power_law_structure() {
    let _guard = serial();
    // Fitted slope band over five seeds at scale 17, default probabilities.
    for seed in 1..=5u64 {
        let stats = degree_distribution(&generate(&GeneratorConfig::new(17, seed)).unwrap()).unwrap();
        assert!(
            (-0.85..=-0.40).contains(&stats.fitted_slope),
            "seed {seed}: slope {} outside [-0.85, -0.40]",
            stats.fitted_slope
        );
    }

    // The fit recovers a constructed exact power law to +-0.02.
    let mut histogram = BTreeMap::new();
    for d in 1u64..=100 {
        histogram.insert(d, (1e4 * (d as f64).powf(-0.62)).round() as u64);
    }
    let slope = power_law_slope(&histogram).unwrap();
    assert!(
        (slope - (-0.62)).abs() <= 0.02,
        "synthetic oracle slope {slope}, expected -0.62 +- 0.02"
    );
    pass(2, "power-law structure");
}

#[test]
fn criterion_3_sizing_formulas() {
    let _guard = serial();
    let small = BenchmarkConfig {
        n_server: 1,
        n_ingest: 1,
        n_tablet: 32,
        scale: 17,
        ..BenchmarkConfig::default()
    };
    assert_eq!(small.n_rows(), 4_194_304);
    assert_eq!(small.planned_entries(), 33_554_432);
    assert_eq!(small.n_vertices(), 131_072);

    let large = BenchmarkConfig {
        n_server: 216,
        n_ingest: 6,
        n_tablet: 32,
        scale: 17,
        ..BenchmarkConfig::default()
    };
    assert_eq!(large.n_rows(), 5_435_817_984);
    assert_eq!(large.planned_entries(), 43_486_543_872);
    let relative = (large.planned_entries() as f64 - 43.5e9).abs() / 43.5e9;
    assert!(relative < 0.01, "~43.5B planned entries, off by {relative:.4}");

    // The split plan agrees with the arithmetic without building a store.
    let plan = tablestack_bench::compute_global_splits(&small);
    assert_eq!(plan.tablet_count(), 32);
    assert_eq!(plan.splits[0].0, "0131072");
    pass(3, "sizing formulas");
}

#[test]
fn criterion_4_perfect_balance() {
    let _guard = serial();
    let started = Instant::now();
    for (n_server, n_ingest, n_tablet) in [(1, 1, 4), (2, 2, 4), (4, 2, 8)] {
        for scale in [8u32, 10] {
            let cfg = BenchmarkConfig {
                n_server,
                n_ingest,
                n_tablet,
                scale,
                seed: 21,
                ..BenchmarkConfig::default()
            };
            let dir = tempfile::tempdir().unwrap();
            let output = run_benchmark(&cfg, dir.path()).unwrap();
            let verification = verify_ingest(&output.store, &output.table, &cfg).unwrap();
            assert!(
                verification.passed(),
                "({n_server},{n_ingest},{n_tablet}) scale {scale}: {:?}",
                verification.first_failure()
            );
            // Every tablet accepted exactly M inserts.
            let m = cfg.edges_per_graph();
            for s in output.store.tablet_summaries(&output.table).unwrap() {
                assert_eq!(s.inserts_accepted, m);
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "balance suite took {elapsed:.1}s, limit 60s");
    pass(4, "perfect balance");
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

#[test]
fn criterion_5_weak_scaling() {
    let _guard = serial();
    // Fixed per-worker work: scale 10, 4 tablets each, one worker per
    // server; N_p doubles while per-worker volume stays constant.
    let mut per_worker_medians = Vec::new();
    let mut aggregate_medians = Vec::new();
    for n_p in [1usize, 2, 4, 8] {
        let cfg = BenchmarkConfig {
            n_server: n_p,
            n_ingest: 1,
            n_tablet: 4,
            scale: 10,
            seed: 5,
            ..BenchmarkConfig::default()
        };
        let mut worker_rates = Vec::new();
        let mut aggregate_rates = Vec::new();
        for _ in 0..3 {
            let dir = tempfile::tempdir().unwrap();
            let output = run_benchmark(&cfg, dir.path()).unwrap();
            worker_rates.push(output.report.per_worker_mean_entries_per_sec);
            aggregate_rates.push(output.report.aggregate_entries_per_sec);
        }
        let worker = median(worker_rates);
        let aggregate = median(aggregate_rates);
        println!(
            "  n_p={n_p}: per-worker {:.0}/s, per-server {:.0}/s, aggregate {:.0}/s",
            worker,
            aggregate / n_p as f64,
            aggregate
        );
        per_worker_medians.push(worker);
        aggregate_medians.push(aggregate);
    }

    let baseline = per_worker_medians[0];
    for (i, rate) in per_worker_medians.iter().enumerate() {
        let ratio = rate / baseline;
        assert!(
            (0.7..=1.3).contains(&ratio),
            "per-worker rate at point {i} is {ratio:.2}x the single-worker baseline"
        );
    }
    for pair in aggregate_medians.windows(2) {
        assert!(
            pair[1] > pair[0],
            "aggregate rate must increase with workers: {aggregate_medians:?}"
        );
    }
    pass(5, "weak scaling");
}

#[test]
fn criterion_6_balancer_timing() {
    let _guard = serial();
    let started = Instant::now();
    let store = TabletStore::new(8, StoreConfig::default()).unwrap();
    store.create_table("big").unwrap();
    let splits: Vec<String> = (1..=50_000u64).map(|i| format!("{i:06}")).collect();
    store.add_splits("big", &splits).unwrap();

    let clock = SimClock::new();
    let elapsed = store.run_balancer_until_stable("big", &clock).unwrap();
    assert!(
        (750.0..=1250.0).contains(&elapsed),
        "50k pre-splits balanced in {elapsed:.0} simulated seconds, expected 1000 +- 250"
    );
    assert!((clock.now() - elapsed).abs() < 1e-6);

    // Balance invariant across all 8 servers.
    let mut counts = vec![0usize; 8];
    for s in store.tablet_summaries("big").unwrap() {
        counts[s.server] += 1;
    }
    let spread = counts.iter().max().unwrap() - counts.iter().min().unwrap();
    assert!(spread <= 1, "per-server counts {counts:?}");

    let wall = started.elapsed().as_secs_f64();
    assert!(wall < 5.0, "wall time {wall:.2}s, limit 5s");
    pass(6, "balancer timing");
}

#[test]
fn criterion_7_wal_effect() {
    let _guard = serial();
    let run_with_walog = |enabled: bool| -> f64 {
        let config = StoreConfig {
            walog_enabled: true, // stock default; the option string decides
            ingest_service_secs_per_byte: 1e-9,
            ..StoreConfig::default()
        };
        let store = TabletStore::new(2, config).unwrap();
        store.create_table("t").unwrap();
        store
            .set_option(
                Some("t"),
                OPT_WALOG_ENABLED,
                if enabled { "true" } else { "false" },
            )
            .unwrap();
        store.add_splits("t", &["0500".to_string()]).unwrap();
        store.run_balancer_until_stable("t", &SimClock::new()).unwrap();

        let mut writer = store.open_batch_writer("t").unwrap();
        let batch: Vec<_> = (0..20_000)
            .map(|i| {
                tablestack_assoc::Triple::new(format!("{:04}", i % 1000), "c", Value::one())
            })
            .collect();
        writer.put(&batch).unwrap();
        writer.close().unwrap();
        store
            .snapshot_metrics(&SimClock::new())
            .totals
            .ingest_busy_secs
    };

    let on = run_with_walog(true);
    let off = run_with_walog(false);
    assert!(on >= off, "walog on must not be cheaper: {on} vs {off}");
    let factor = StoreConfig::default().walog_cost_factor;
    let ratio = on / off;
    assert!(
        (ratio - factor).abs() <= 0.1 * factor,
        "on/off service-time ratio {ratio:.3}, expected {factor} +- 10%"
    );
    pass(7, "walog cost effect");
}

#[test]
fn criterion_8_assoc_oracle_equivalence() {
    let _guard = serial();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let empty = AssocArray::empty();

    for case in 0..1000 {
        let dim = rng.gen_range(2..=32);
        let (a, ma) = oracle::random_array(&mut rng, dim);
        let (b, mb) = oracle::random_array(&mut rng, dim);

        // Construction and round trip.
        oracle::assert_matches(&a, &ma, "from_triples/keep_last");
        let rebuilt =
            AssocArray::from_triples(&a.to_triples(), CollisionPolicy::KeepLast).unwrap();
        assert_eq!(rebuilt, a, "to_triples round trip");

        let numeric_triples = oracle::random_triples(&mut rng, dim, false);
        let summed = AssocArray::from_triples(&numeric_triples, CollisionPolicy::Sum).unwrap();
        oracle::assert_matches(&summed, &oracle::model_sum(&numeric_triples), "from_triples/sum");

        // Row queries.
        let picked: Vec<String> = (0..rng.gen_range(0..4))
            .map(|_| format!("r{:02}", rng.gen_range(0..dim + 2)))
            .collect();
        oracle::assert_matches(
            &a.rows_by_keys(&picked),
            &oracle::retain_rows(&ma, |r| picked.iter().any(|k| k == r)),
            "rows_by_keys",
        );
        let prefix = ["r", "r0", "r1", "", "zz"][rng.gen_range(0..5)];
        oracle::assert_matches(
            &a.rows_by_prefix(prefix),
            &oracle::retain_rows(&ma, |r| r.starts_with(prefix)),
            "rows_by_prefix",
        );
        let mut lo = format!("r{:02}", rng.gen_range(0..dim));
        let mut hi = format!("r{:02}", rng.gen_range(0..dim));
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        oracle::assert_matches(
            &a.rows_by_range(&lo, &hi).unwrap(),
            &oracle::retain_rows(&ma, |r| lo.as_str() <= r && r <= hi.as_str()),
            "rows_by_range",
        );
        let start = rng.gen_range(1..=dim);
        let stop = rng.gen_range(start..=dim + 2);
        oracle::assert_matches(
            &a.rows_by_position(start, stop).unwrap(),
            &oracle::rows_by_position(&ma, start, stop),
            "rows_by_position",
        );
        let needle = if rng.gen_bool(0.5) {
            Value::num(*oracle::NUMERIC_POOL.choose(&mut rng).unwrap())
        } else {
            Value::text(*oracle::TEXT_POOL.choose(&mut rng).unwrap())
        };
        let expected = if ma.values().next().map(|v| v.kind()) == Some(needle.kind()) {
            oracle::filter_value(&ma, &needle)
        } else {
            oracle::Model::new()
        };
        oracle::assert_matches(&a.filter_value(&needle), &expected, "filter_value");

        // Algebra.
        oracle::assert_matches(&a.numeric_projection(), &oracle::project(&ma), "numeric_projection");
        oracle::assert_matches(&a.add(&b), &oracle::merge(&ma, &mb, 1.0), "add");
        oracle::assert_matches(&a.sub(&b), &oracle::merge(&ma, &mb, -1.0), "sub");
        oracle::assert_matches(&a.and(&b), &oracle::and(&ma, &mb), "and");
        oracle::assert_matches(&a.or(&b), &oracle::or(&ma, &mb), "or");
        oracle::assert_matches(&a.matmul(&b), &oracle::matmul(&ma, &mb), "matmul");
        oracle::assert_matches(&a.transpose(), &oracle::transpose(&ma), "transpose");
        let frontier: Vec<String> = a
            .row_keys()
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        oracle::assert_matches(
            &a.bfs_step(&frontier),
            &oracle::bfs_step(&ma, &frontier),
            "bfs_step",
        );

        // Re-keying.
        let (nk, mnk) = oracle::random_numeric_keyed(&mut rng);
        let offset = rng.gen_range(0..9000u64);
        oracle::assert_matches(
            &nk.apply_row_offset(offset, 5).unwrap(),
            &oracle::row_offset(&mnk, offset, 5),
            "apply_row_offset",
        );

        // Algebraic identities on the same draws.
        assert_eq!(a.add(&empty), a.numeric_projection(), "add identity (case {case})");
        assert!(a.sub(&a).is_empty(), "self-subtraction empties");
        assert_eq!(a.transpose().transpose(), a, "transpose involution");
        assert_eq!(a.and(&a).nnz(), a.nnz(), "and-idempotence on patterns");
        assert_eq!(a.or(&b), b.or(&a), "or-commutativity");
    }

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "oracle suite took {elapsed:.1}s, limit 30s");
    pass(8, "associative-array oracle equivalence");
}

#[test]
fn criterion_9_determinism() {
    let _guard = serial();
    let mut cfg = BenchmarkConfig {
        n_server: 2,
        n_ingest: 2,
        n_tablet: 4,
        scale: 8,
        seed: 77,
        ..BenchmarkConfig::default()
    };
    cfg.store.ingest_service_secs_per_byte = 0.0;

    // Both runs start from one manifest on disk.
    let dir = tempfile::tempdir().unwrap();
    let manifest_path = dir.path().join("manifest.json");
    write_json(&manifest_path, &RunManifest::new(cfg)).unwrap();

    let run = |name: &str| {
        let cfg = load_config(&manifest_path).unwrap();
        let run_dir = dir.path().join(name);
        fs::create_dir_all(&run_dir).unwrap();
        let output = run_benchmark(&cfg, &run_dir).unwrap();
        let report_path = run_dir.join("report.json");
        write_json(&report_path, &output.report).unwrap();
        let verification = verify_ingest(&output.store, &output.table, &cfg).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
        (json, verification)
    };
    let (report_a, verify_a) = run("a");
    let (report_b, verify_b) = run("b");

    assert_eq!(report_a["total_entries"], report_b["total_entries"]);
    let counts = |r: &serde_json::Value| -> Vec<(u64, u64)> {
        r["per_worker"]
            .as_array()
            .unwrap()
            .iter()
            .map(|w| {
                (
                    w["entries_inserted"].as_u64().unwrap(),
                    w["distinct_entries"].as_u64().unwrap(),
                )
            })
            .collect()
    };
    assert_eq!(counts(&report_a), counts(&report_b));

    let outcomes = |v: &tablestack_bench::VerificationReport| -> Vec<(String, bool)> {
        v.checks.iter().map(|c| (c.name.clone(), c.passed)).collect()
    };
    assert_eq!(outcomes(&verify_a), outcomes(&verify_b));
    assert!(verify_a.passed());
    pass(9, "determinism");
}
