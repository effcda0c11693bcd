//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fail. Tolerances are pinned below.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roofinv::aggregate::TRACT_COLUMNS;
use roofinv::classify::apply_predictions;
use roofinv::imagery::{
    execute_fetch, ground_resolution, plan_image, Clock, FetchLimits, FetchStatus, ImagePlan, MemoryCache, PlanConfig,
    VirtualClock,
};
use roofinv::impute::{
    build_training_set, cross_validate, permutation_importance, train_validation_split, Feature, ForestConfig,
    MarginConfig, ModelConfig, Target, TrainedModel,
};
use roofinv::ingest::{parse_buildings, ParseOptions};
use roofinv::metrics::{metrics, ConfusionMatrix};
use roofinv::spatial::{all_neighbor_features, haversine, radius_sweep, NeighborIndex, TieBreak, DEFAULT_SWEEP_RADII_M};
use roofinv::synth::{generate, SynthCity, SynthConfig};
use roofinv::{BuildingId, BuildingRecord, Complexity, Inventory, LatLon, RoofClass, RoofFamily, RoofFeatures};
use sha2::{Digest, Sha256};

const METRIC_TOL: f64 = 1e-12;
const METRIC_BUDGET: Duration = Duration::from_secs(5);
const BASELINE_TARGET: f64 = 0.90;
const BASELINE_TOL: f64 = 0.03;
const BASELINE_BUDGET: Duration = Duration::from_secs(10);
const LIFT_OVER_MAJORITY: f64 = 0.10;
const MARGIN_SLACK: f64 = 0.02;
const NOISE_TOL: f64 = 0.02;
const UNKNOWN_TARGET: f64 = 0.17;
const UNKNOWN_TOL: f64 = 0.015;
const EQUATOR_Z0: f64 = 156_543.034;
const EQUATOR_TOL: f64 = 0.01;
const E2E_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_roofinv")
}

fn roofinv(dir: &Path, args: &[&str], threads: &str) -> Result<(), String> {
    let out = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env("RAYON_NUM_THREADS", threads)
        .env("RUST_LOG", "warn")
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("roofinv {args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))
    }
}

// ---- 1 ----

fn oracle_metrics(c: &[Vec<u64>]) -> (Vec<[f64; 3]>, f64, [f64; 3]) {
    let n = c.len();
    let mut per = Vec::new();
    let (mut total, mut diag) = (0u64, 0u64);
    let mut supported = Vec::new();
    for i in 0..n {
        let row: u64 = c[i].iter().sum();
        let col: u64 = (0..n).map(|k| c[k][i]).sum();
        total += row;
        diag += c[i][i];
        let p = if col == 0 { 0.0 } else { c[i][i] as f64 / col as f64 };
        let r = if row == 0 { 0.0 } else { c[i][i] as f64 / row as f64 };
        let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        per.push([p, r, f]);
        if row > 0 {
            supported.push(i);
        }
    }
    let k = supported.len().max(1) as f64;
    let mut mac = [0.0; 3];
    for &i in &supported {
        for m in 0..3 {
            mac[m] += per[i][m];
        }
    }
    mac.iter_mut().for_each(|v| *v /= k);
    (per, diag as f64 / total as f64, mac)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 1000 {
        let n = rng.gen_range(2..=6);
        let counts: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=50)).collect()).collect();
        if counts.iter().flatten().all(|&v| v == 0) {
            continue;
        }
        let labels = (0..n).map(|i| format!("c{i}")).collect();
        let m = metrics(&ConfusionMatrix::from_counts(labels, counts.clone()).map_err(|e| e.to_string())?);
        let (per, micro, mac) = oracle_metrics(&counts);
        for (c, o) in m.per_class.iter().zip(&per) {
            worst = worst.max((c.precision - o[0]).abs()).max((c.recall - o[1]).abs()).max((c.f1 - o[2]).abs());
        }
        for v in [m.micro.precision, m.micro.recall, m.micro.f1] {
            worst = worst.max((v - micro).abs());
        }
        worst = worst
            .max((m.macro_avg.precision - mac[0]).abs())
            .max((m.macro_avg.recall - mac[1]).abs())
            .max((m.macro_avg.f1 - mac[2]).abs());
        done += 1;
    }
    let elapsed = start.elapsed();
    check(worst <= METRIC_TOL, format!("max deviation {worst:e}"))?;
    check(elapsed < METRIC_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("1000 matrices, max deviation {worst:e}, {:.3}s", elapsed.as_secs_f64()))
}

// ---- 2 ----

fn criterion_2() -> Outcome {
    use RoofClass::*;
    let expected = [
        (SimpleGable, RoofFamily::Gable, Complexity::Simple, SimpleGable),
        (SimpleCrossGable, RoofFamily::Gable, Complexity::Complex, ComplexCrossGable),
        (ComplexCrossGable, RoofFamily::Gable, Complexity::Complex, ComplexCrossGable),
        (SimpleHip, RoofFamily::Hip, Complexity::Simple, SimpleHip),
        (CrossHip, RoofFamily::Hip, Complexity::Complex, CrossHip),
    ];
    let mut failures = Vec::new();
    for (class, fam, cx, back) in expected {
        let f = class.to_features().map_err(|e| e.to_string())?;
        if f != RoofFeatures::new(fam, cx) {
            failures.push(format!("{class:?} -> {f:?}"));
        }
        if f.to_class() != back {
            failures.push(format!("{class:?} round-trips to {:?}", f.to_class()));
        }
        let cells = [(true, false), (true, true), (false, false), (false, true)]
            .iter()
            .filter(|&&(g, c)| class.is_gable() == Ok(g) && class.is_complex() == Ok(c))
            .count();
        if cells != 1 {
            failures.push(format!("{class:?} matches {cells} partition cells"));
        }
    }
    for f in RoofFeatures::ALL {
        if f.to_class().to_features() != Ok(f) {
            failures.push(format!("{f:?} does not round-trip"));
        }
    }
    if Unknown.to_features().is_ok() || Unknown.is_gable().is_ok() || Unknown.is_complex().is_ok() {
        failures.push("unknown has features".into());
    }
    check(failures.is_empty(), failures.join("; "))?;
    Ok("5 classes and 4 feature pairs, scg collapses to ccg, 0 failures".into())
}

// ---- 3 ----

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pairs_checked = 0usize;
    for trial in 0..100 {
        let center = LatLon::new(rng.gen_range(-60.0..60.0), rng.gen_range(-170.0..170.0)).unwrap();
        let radius_km = rng.gen_range(0.3..2.0);
        let pts: Vec<LatLon> = (0..1000)
            .map(|_| {
                let d = radius_km * 1000.0 * rng.gen::<f64>().sqrt();
                roofinv::spatial::destination(center, rng.gen_range(0.0..360.0), d)
            })
            .collect();
        let ids: Vec<BuildingId> = (0..pts.len()).map(|i| BuildingId(format!("p{i:04}"))).collect();
        let idx = NeighborIndex::new(ids.iter().cloned().zip(pts.iter().copied()));
        let dist: Vec<Vec<f64>> = pts.iter().map(|a| pts.iter().map(|b| haversine(*a, *b)).collect()).collect();
        for r in DEFAULT_SWEEP_RADII_M {
            for i in 0..pts.len() {
                let got: BTreeSet<BuildingId> = idx.neighbors_within(&ids[i], r).map_err(|e| e.to_string())?.into_iter().collect();
                let want: BTreeSet<BuildingId> =
                    (0..pts.len()).filter(|&j| j != i && dist[i][j] <= r).map(|j| ids[j].clone()).collect();
                if got != want {
                    return Err(format!("trial {trial}, radius {r}, point {i}: {} vs {} neighbors", got.len(), want.len()));
                }
                pairs_checked += want.len();
            }
        }
    }
    Ok(format!("100 inventories x 1000 points x 4 radii exact; {pairs_checked} neighbor pairs"))
}

// ---- 4 ----

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let radii = [20.0, 35.0, 50.0, 80.0, 100.0, 150.0, 250.0];
    let mut violations = Vec::new();
    let mut nontrivial = 0;
    let n_configs = 24;
    for k in 0..n_configs {
        let cfg = SynthConfig {
            seed: 400 + k,
            n_clusters: rng.gen_range(4..40),
            buildings_per_cluster: rng.gen_range(1..30),
            cluster_spacing_m: rng.gen_range(150.0..1200.0),
            intra_spacing_m: rng.gen_range(10.0..120.0),
            purity: rng.gen_range(0.5..=1.0),
            occlusion_rate: rng.gen_range(0.0..0.8),
            ..SynthConfig::default()
        };
        let city = generate(&cfg).map_err(|e| e.to_string())?;
        let (classified, _) = apply_predictions(city.inventory.clone(), &city.predictions);
        let idx = NeighborIndex::from_inventory(&classified);
        let rows = radius_sweep(&idx, &classified.classified_roofs(), &radii, TieBreak::Gable).map_err(|e| e.to_string())?;
        if rows[0].missing_fraction > 0.0 {
            nontrivial += 1;
        }
        for w in rows.windows(2) {
            if w[1].missing_fraction > w[0].missing_fraction {
                violations.push(format!("config {k}: {} m {} > {} m {}", w[1].radius_m, w[1].missing_fraction, w[0].radius_m, w[0].missing_fraction));
            }
        }
    }
    check(violations.is_empty(), violations.join("; "))?;
    check(nontrivial > 0, "no config had any missing neighbors; the check is vacuous")?;
    Ok(format!("{n_configs} configs, 0 violations, {nontrivial} with missing data at {} m", radii[0]))
}

// ---- 5 ----

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = SynthConfig { seed: 5, purity: 0.9, occlusion_rate: 0.0, intra_spacing_m: 20.0, ..SynthConfig::default() };
    check(cfg.n_buildings() >= 5000, "city too small")?;
    let city = generate(&cfg).map_err(|e| e.to_string())?;
    let (classified, _) = apply_predictions(city.inventory.clone(), &city.predictions);
    let idx = NeighborIndex::from_inventory(&classified);
    let rows = radius_sweep(&idx, &classified.classified_roofs(), &[80.0], TieBreak::Gable).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let acc = rows[0].accuracy.ok_or("no building was evaluated")?;
    check((acc - BASELINE_TARGET).abs() <= BASELINE_TOL, format!("accuracy {acc:.4}"))?;
    check(elapsed < BASELINE_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("{} buildings, accuracy {acc:.4} at 80 m, {:.2}s", city.inventory.len(), elapsed.as_secs_f64()))
}

// ---- 6, 7 ----

struct Prepared {
    classified: Inventory,
    neighbors: BTreeMap<BuildingId, roofinv::spatial::NeighborFeatures>,
}

fn prepare(city: &SynthCity) -> Result<Prepared, String> {
    let (classified, _) = apply_predictions(city.inventory.clone(), &city.predictions);
    let idx = NeighborIndex::from_inventory(&classified);
    let neighbors = all_neighbor_features(&idx, &classified.classified_roofs(), 80.0).map_err(|e| e.to_string())?;
    Ok(Prepared { classified, neighbors })
}

fn criterion_6() -> Outcome {
    let cfg = SynthConfig { seed: 6, year_effect: 0.5, ..SynthConfig::default() };
    let city = generate(&cfg).map_err(|e| e.to_string())?;
    let p = prepare(&city)?;
    let set = build_training_set(&p.classified, &p.neighbors, Target::Type, &Target::Type.default_features())
        .map_err(|e| e.to_string())?;
    let counts = set.class_counts();
    let majority = *counts.iter().max().unwrap() as f64 / set.len() as f64;
    let forest = cross_validate(&set, &ModelConfig::Forest(ForestConfig::default()), 10, 42).map_err(|e| e.to_string())?;
    let margin = cross_validate(&set, &ModelConfig::Margin(MarginConfig::default()), 10, 42).map_err(|e| e.to_string())?;
    let (f, m) = (forest.mean_accuracy, margin.mean_accuracy);
    let summary = format!("forest {f:.4}, margin {m:.4}, majority {majority:.4}");
    check(f >= majority + LIFT_OVER_MAJORITY, format!("lift too small: {summary}"))?;
    check(f >= m - MARGIN_SLACK, format!("forest trails margin: {summary}"))?;
    Ok(format!("10-fold CV on {} rows: {summary}", set.len()))
}

fn criterion_7() -> Outcome {
    let cfg = SynthConfig { seed: 7, ..SynthConfig::default() };
    let city = generate(&cfg).map_err(|e| e.to_string())?;
    let p = prepare(&city)?;
    let mut notes = Vec::new();
    for target in [Target::Type, Target::Complexity] {
        let set = build_training_set(&p.classified, &p.neighbors, target, &target.all_features()).map_err(|e| e.to_string())?;
        let (tr, va) = train_validation_split(&set.labels, 0.25, 42);
        let train = set.subset(&tr);
        let val = set.subset(&va);
        let model = TrainedModel::fit_set(&train, &ModelConfig::Forest(ForestConfig::default()), 42).map_err(|e| e.to_string())?;
        let report = permutation_importance(&model, &val.rows, &val.labels, 10, 42);
        let noise = report.features.iter().find(|f| f.feature == Feature::Stories).ok_or("stories missing")?;
        check(noise.mean.abs() <= NOISE_TOL, format!("{target}: noise importance {:.4}", noise.mean))?;
        let ranked = report.ranked();
        // The ranking claim is about type; the generator ties area to
        // complexity, so area is expected to lead the complexity model.
        if target == Target::Type {
            check(ranked[0].feature == Feature::NeighborType, format!("type: {} ranked first", ranked[0].feature.name()))?;
        }
        notes.push(format!(
            "{target}: {} first ({:.3}), stories {:+.4}",
            ranked[0].feature.name(),
            ranked[0].mean,
            noise.mean
        ));
    }
    Ok(notes.join("; "))
}

// ---- 8, 9, 11 ----

fn dir_digests(dir: &Path) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        if e.file_type().map_err(|e| e.to_string())?.is_file() {
            let bytes = std::fs::read(e.path()).map_err(|e| e.to_string())?;
            out.insert(e.file_name().to_string_lossy().into_owned(), hex::encode(Sha256::digest(&bytes)));
        }
    }
    Ok(out)
}

struct EndToEnd {
    root: tempfile::TempDir,
    elapsed: Duration,
}

impl EndToEnd {
    fn city(&self) -> PathBuf {
        self.root.path().join("city")
    }

    fn run_dir(&self, name: &str) -> PathBuf {
        self.root.path().join(name)
    }

    fn run_all(&self, name: &str, threads: &str) -> Result<(), String> {
        let c = self.city();
        let s = |p: &str| c.join(p).to_string_lossy().into_owned();
        let out = self.run_dir(name).to_string_lossy().into_owned();
        roofinv(
            self.root.path(),
            &[
                "--out-dir",
                &out,
                "--buildings",
                &s("buildings.csv"),
                "--predictions",
                &s("predictions.csv"),
                "--truth",
                &s("truth.csv"),
                "--tracts",
                &s("tracts.geojson"),
                "run-all",
            ],
            threads,
        )
    }
}

/// synth (5000 buildings, q = 0.17) followed by a timed run-all.
fn end_to_end() -> Result<EndToEnd, String> {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let e = EndToEnd { root, elapsed: Duration::ZERO };
    let start = Instant::now();
    let city = e.city().to_string_lossy().into_owned();
    roofinv(e.root.path(), &["--out-dir", &city, "--seed", "11", "synth", "--occlusion", "0.17"], "4")?;
    e.run_all("run1", "4")?;
    Ok(EndToEnd { elapsed: start.elapsed(), ..e })
}

fn criterion_8(e: &EndToEnd) -> Outcome {
    e.run_all("run2", "1")?;
    let a = dir_digests(&e.run_dir("run1"))?;
    let b = dir_digests(&e.run_dir("run2"))?;
    check(a.contains_key("model_type.json") && a.contains_key("model_complexity.json"), "model files missing")?;
    let differing: Vec<&String> = a.keys().filter(|k| a.get(*k) != b.get(*k)).collect();
    check(a.len() == b.len() && differing.is_empty(), format!("differing outputs: {differing:?}"))?;
    Ok(format!("{} output files identical across runs with 4 and 1 worker threads", a.len()))
}

fn criterion_9(e: &EndToEnd) -> Outcome {
    let dir = e.run_dir("run1");
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.join("apply_report.json")).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let rate = report["unknown_rate"].as_f64().ok_or("unknown_rate missing")?;
    check((rate - UNKNOWN_TARGET).abs() <= UNKNOWN_TOL, format!("unknown rate {rate:.4}"))?;
    let f = std::fs::File::open(dir.join("imputed.csv")).map_err(|e| e.to_string())?;
    let (inv, rej) = parse_buildings(f, "imputed.csv", &ParseOptions::default()).map_err(|e| e.to_string())?;
    check(rej.is_empty(), "imputed inventory has rejected rows")?;
    let absent = inv.iter().filter(|b| b.valid_roof().is_none()).count();
    check(absent == 0, format!("{absent} buildings still roof-absent"))?;
    Ok(format!("unknown rate {rate:.4}; 0 of {} buildings roof-absent after imputation", inv.len()))
}

fn criterion_11(e: &EndToEnd) -> Outcome {
    check(e.elapsed < E2E_BUDGET, format!("synth + run-all took {:?}", e.elapsed))?;
    let dir = e.run_dir("run1");
    let mut rdr = csv::Reader::from_path(dir.join("tracts.csv")).map_err(|e| e.to_string())?;
    let header: Vec<String> = rdr.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    check(header == TRACT_COLUMNS, format!("header {header:?}"))?;
    let mut total = 0usize;
    let mut small = BTreeSet::new();
    let mut large = BTreeSet::new();
    for rec in rdr.records() {
        let r = rec.map_err(|e| e.to_string())?;
        let n: usize = r[1].parse().map_err(|_| "bad n_buildings")?;
        let valid: usize = r[2].parse().map_err(|_| "bad n_valid")?;
        let counts: usize = (3..8).map(|k| r[k].parse::<usize>().unwrap_or(usize::MAX / 8)).sum();
        check(counts == valid, format!("tract {}: counts {counts} != n_valid {valid}", &r[0]))?;
        for k in 8..11 {
            let v: f64 = r[k].parse().map_err(|_| "bad share")?;
            check((0.0..=1.0).contains(&v), format!("tract {}: share {v}", &r[0]))?;
        }
        let included = &r[11] == "true";
        check(included == (n >= 10), format!("tract {}: included={included} with {n} buildings", &r[0]))?;
        total += n;
        if &r[0] != "unassigned" {
            if n < 10 {
                small.insert(r[0].to_string());
            } else {
                large.insert(r[0].to_string());
            }
        }
    }
    check(total == 5000, format!("tract counts sum to {total}"))?;
    check(!small.is_empty() && !large.is_empty(), "need both undersized and mapped tracts")?;
    let map: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.join("tract_map.geojson")).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mapped: BTreeSet<String> = map["features"]
        .as_array()
        .ok_or("map has no features")?
        .iter()
        .filter_map(|f| f["properties"]["tract_id"].as_str().map(String::from))
        .collect();
    check(mapped == large, format!("{} mapped vs {} tracts with >= 10 houses", mapped.len(), large.len()))?;
    Ok(format!(
        "{:.1}s; {} tracts mapped, {} undersized excluded, counts sum to {total}",
        e.elapsed.as_secs_f64(),
        large.len(),
        small.len()
    ))
}

// ---- 10 ----

fn criterion_10() -> Outcome {
    let z0 = ground_resolution(0.0, 0).map_err(|e| e.to_string())?;
    check((z0 - EQUATOR_Z0).abs() <= EQUATOR_TOL, format!("zoom 0 resolution {z0}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cfg = PlanConfig::default();
    for trial in 0..10_000 {
        let lat = rng.gen_range(-80.0..=80.0);
        let area = rng.gen_range(1.0..20_000.0);
        let b = BuildingRecord::new("x", LatLon::new(lat, rng.gen_range(-180.0..180.0)).unwrap(), 2000, area);
        let plan = plan_image(&b, &cfg).map_err(|e| format!("trial {trial}: {e}"))?;
        let span = ground_resolution(lat, plan.zoom).unwrap() * cfg.image_size_px as f64;
        let extent = cfg.crop.crop_extent(area).unwrap();
        check(span >= extent, format!("trial {trial}: span {span} < extent {extent}"))?;
    }
    let plans: Vec<ImagePlan> = (0..100)
        .map(|i| ImagePlan {
            building_id: BuildingId(format!("b{i:03}")),
            lat: 0.0,
            lon: 0.0,
            zoom: 20,
            image_size_px: 640,
            ground_extent_m: 100.0,
            request_uri: format!("stub://{i}"),
            cache_key: format!("{i:032x}"),
        })
        .collect();
    let clock = Arc::new(VirtualClock::new());
    let stub = |_: &str| -> Result<Vec<u8>, String> { Ok(vec![0xff]) };
    let report = execute_fetch(&plans, &stub, &MemoryCache::default(), &FetchLimits::default(), clock.clone());
    check(report.count(FetchStatus::Fetched) == 100, "not every plan fetched")?;
    let t = clock.now().as_secs_f64();
    check(t >= 9.0, format!("virtual time {t}s"))?;
    Ok(format!("zoom 0 {z0:.4} m/px; 10000 crops covered; 100 fetches in {t:.2}s virtual"))
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()));
    match result {
        Ok(detail) => {
            println!("PASS criterion {name}: {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL criterion {name}: {detail}");
            false
        }
    }
}

fn main() {
    let mut ok = true;
    ok &= run("1 metric oracle", criterion_1);
    ok &= run("2 taxonomy round-trip", criterion_2);
    ok &= run("3 spatial exactness", criterion_3);
    ok &= run("4 sweep monotonicity", criterion_4);
    ok &= run("5 baseline accuracy", criterion_5);
    ok &= run("6 imputation lift", criterion_6);
    ok &= run("7 permutation importance", criterion_7);
    let e2e = end_to_end();
    match &e2e {
        Ok(e) => {
            ok &= run("8 determinism", || criterion_8(e));
            ok &= run("9 unknown handling", || criterion_9(e));
            ok &= run("10 imagery math", criterion_10);
            ok &= run("11 end-to-end desk run", || criterion_11(e));
        }
        Err(err) => {
            for name in ["8 determinism", "9 unknown handling", "11 end-to-end desk run"] {
                println!("FAIL criterion {name}: end-to-end run failed: {err}");
            }
            run("10 imagery math", criterion_10);
            ok = false;
        }
    }
    if !ok {
        std::process::exit(1);
    }
}
