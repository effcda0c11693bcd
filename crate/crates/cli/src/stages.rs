//! Pipeline stages. Each reads its inputs from files, writes its outputs
//! into the output directory, and records a manifest.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use roofinv::aggregate::{
    city_distribution, export_map, tract_summaries, write_distribution_csv, write_tract_csv, SourceFilter,
};
use roofinv::classify::{apply_predictions, parse_predictions, write_discrepancies, PredictionRecord};
use roofinv::imagery::{execute_fetch, plan_image, write_plan_manifest, DiskCache, FetchStatus, HttpFetcher, SystemClock};
use roofinv::impute::{
    build_training_set, cross_validate, feature_row, impute_missing, permutation_importance, train_validation_split,
    write_accuracy_csv, write_importance_csv, AccuracyRow, ModelConfig, Target, TrainedModel,
};
use roofinv::ingest::{assign_tracts, parse_buildings, parse_tracts, write_buildings, write_rejections, ParseOptions, TractPolygon};
use roofinv::metrics::{confusion, metrics, render_table, write_confusion_csv, write_metrics_csv};
use roofinv::spatial::{all_neighbor_features, radius_sweep, write_sweep_csv, NeighborFeatures, NeighborIndex};
use roofinv::synth::{generate, SynthConfig, SynthPaths};
use roofinv::{BuildingId, Inventory, RoofClass};
use serde_json::json;

use crate::config::PipelineConfig;
use crate::error::CliError;
use crate::manifest::Manifest;

pub const INVENTORY: &str = "inventory.csv";
pub const REJECTIONS: &str = "rejections.csv";
pub const IMAGE_PLAN: &str = "image_plan.csv";
pub const FETCH_REPORT: &str = "fetch_report.csv";
pub const CLASSIFIED: &str = "classified.csv";
pub const DISCREPANCIES: &str = "discrepancies.csv";
pub const PREDICTION_REJECTIONS: &str = "prediction_rejections.csv";
pub const APPLY_REPORT: &str = "apply_report.json";
pub const METRICS: &str = "metrics.csv";
pub const CONFUSION: &str = "confusion.csv";
pub const METRICS_TABLE: &str = "metrics.txt";
pub const SWEEP: &str = "sweep.csv";
pub const MODEL_TYPE: &str = "model_type.json";
pub const MODEL_COMPLEXITY: &str = "model_complexity.json";
pub const CV_TYPE: &str = "cv_type.csv";
pub const CV_COMPLEXITY: &str = "cv_complexity.csv";
pub const IMPUTED: &str = "imputed.csv";
pub const IMPUTE_REPORT: &str = "impute_report.json";
pub const IMPORTANCE_TYPE: &str = "importance_type.csv";
pub const IMPORTANCE_COMPLEXITY: &str = "importance_complexity.csv";
pub const TRACT_REPORT: &str = "tracts.csv";
pub const TRACT_MAP: &str = "tract_map.geojson";
pub const DISTRIBUTION_CLASSIFIED: &str = "distribution_classified.csv";
pub const DISTRIBUTION_IMPUTED: &str = "distribution_imputed.csv";

/// What a stage read and wrote.
#[derive(Debug, Default, Clone)]
pub struct StageFiles {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

fn required<'a>(p: &'a Option<PathBuf>, what: &str, flag: &str) -> Result<&'a Path, CliError> {
    p.as_deref().ok_or_else(|| CliError::MissingInput(format!("{what} is required (--{flag} or `{}` in the config)", flag.replace('-', "_"))))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> roofinv::Result<()>) -> Result<(), CliError> {
    let mut w = create(path)?;
    f(&mut w)?;
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn ensure_out(cfg: &PipelineConfig) -> Result<&Path, CliError> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::io(&cfg.out_dir, e))?;
    Ok(&cfg.out_dir)
}

fn finish(stage: &str, cfg: &PipelineConfig, files: StageFiles) -> Result<StageFiles, CliError> {
    Manifest::build(stage, cfg, &files.inputs, &files.outputs)?.write(&cfg.out_dir)?;
    log::info!("stage {stage} wrote {} files", files.outputs.len());
    Ok(files)
}

/// An inventory file written by an earlier stage (or the one given explicitly).
fn load_inventory(path: &Path) -> Result<Inventory, CliError> {
    let (inv, rejected) = parse_buildings(open(path)?, &path.display().to_string(), &ParseOptions::default())?;
    if !rejected.is_empty() {
        return Err(CliError::Validation(format!("{}: {} invalid rows in a pipeline file", path.display(), rejected.len())));
    }
    Ok(inv)
}

fn stage_input(cfg: &PipelineConfig, explicit: &Option<PathBuf>, default_name: &str) -> PathBuf {
    explicit.clone().unwrap_or_else(|| cfg.out_dir.join(default_name))
}

fn load_tracts(path: &Path) -> Result<Vec<TractPolygon>, CliError> {
    let (tracts, rejected) = parse_tracts(&read_text(path)?)?;
    for r in &rejected {
        log::warn!("tract feature {} rejected: {}", r.feature_index, r.reason);
    }
    Ok(tracts)
}

pub fn ingest(cfg: &PipelineConfig) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let buildings = required(&cfg.buildings, "a buildings table", "buildings")?;
    let opts = ParseOptions { area_unit: cfg.area_unit };
    let source = buildings.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let (mut inv, rejected) = parse_buildings(open(buildings)?, &source, &opts)?;
    log::info!("ingested {} buildings, rejected {} rows", inv.len(), rejected.len());
    let mut files = StageFiles { inputs: vec![buildings.to_path_buf()], outputs: Vec::new() };
    if let Some(tracts_path) = &cfg.tracts {
        let tracts = load_tracts(tracts_path)?;
        let (assigned, summary) = assign_tracts(inv, &tracts);
        inv = assigned;
        log::info!(
            "tract assignment: {} assigned, {} kept from source, {} unassigned",
            summary.assigned,
            summary.kept_from_source,
            summary.unassigned
        );
        files.inputs.push(tracts_path.clone());
    }
    let inv_path = out.join(INVENTORY);
    write_with(&inv_path, |w| write_buildings(&inv, w))?;
    let rej_path = out.join(REJECTIONS);
    write_with(&rej_path, |w| write_rejections(&rejected, w))?;
    files.outputs = vec![inv_path, rej_path];
    finish("ingest", cfg, files)
}

pub fn plan_imagery(cfg: &PipelineConfig, input: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, INVENTORY);
    let inv = load_inventory(&inv_path)?;
    let plan_cfg = cfg.plan_config();
    let mut plans = Vec::with_capacity(inv.len());
    for b in inv.iter() {
        match plan_image(b, &plan_cfg) {
            Ok(p) => plans.push(p),
            Err(e) => log::warn!("building {}: no image plan: {e}", b.id),
        }
    }
    log::info!("planned {} of {} images at {} px", plans.len(), inv.len(), cfg.image_size);
    let plan_path = out.join(IMAGE_PLAN);
    write_with(&plan_path, |w| write_plan_manifest(&plans, w))?;
    finish("plan-imagery", cfg, StageFiles { inputs: vec![inv_path], outputs: vec![plan_path] })
}

pub fn fetch(cfg: &PipelineConfig, input: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, INVENTORY);
    let inv = load_inventory(&inv_path)?;
    let fetcher = HttpFetcher::from_env().map_err(CliError::MissingInput)?;
    let plan_cfg = cfg.plan_config();
    let plans: Vec<_> = inv.iter().filter_map(|b| plan_image(b, &plan_cfg).ok()).collect();
    let cache = DiskCache::new(cfg.cache_dir.clone());
    let report = execute_fetch(&plans, &fetcher, &cache, &cfg.fetch_limits(), Arc::new(SystemClock::default()));
    log::info!(
        "fetch: {} fetched, {} cached, {} failed",
        report.count(FetchStatus::Fetched),
        report.count(FetchStatus::Cached),
        report.count(FetchStatus::Failed)
    );
    let report_path = out.join(FETCH_REPORT);
    write_with(&report_path, |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["building_id", "status", "retries", "failure"]).map_err(csv_err)?;
        for o in &report.outcomes {
            let status = match o.status {
                FetchStatus::Fetched => "fetched",
                FetchStatus::Cached => "cached",
                FetchStatus::Failed => "failed",
            };
            c.write_record([o.building_id.0.as_str(), status, &o.retry_count.to_string(), o.failure.as_deref().unwrap_or("")])
                .map_err(csv_err)?;
        }
        c.flush()?;
        Ok(())
    })?;
    finish("fetch", cfg, StageFiles { inputs: vec![inv_path], outputs: vec![report_path] })
}

fn csv_err(e: csv::Error) -> roofinv::Error {
    roofinv::Error::Input(e.to_string())
}

fn load_predictions(path: &Path) -> Result<Vec<PredictionRecord>, CliError> {
    let (preds, rejected) = parse_predictions(open(path)?)?;
    for r in &rejected {
        log::warn!("prediction row {} rejected: {}", r.row, r.reason);
    }
    Ok(preds)
}

pub fn apply(cfg: &PipelineConfig, input: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, INVENTORY);
    let pred_path = required(&cfg.predictions, "a prediction file", "predictions")?;
    let inv = load_inventory(&inv_path)?;
    let (preds, rejected) = parse_predictions(open(pred_path)?)?;
    let (inv, report) = apply_predictions(inv, &preds);
    log::info!(
        "applied {} predictions; unknown rate {:.4}; {} buildings without a prediction",
        report.applied,
        report.unknown_rate(),
        report.unpredicted
    );
    let classified = out.join(CLASSIFIED);
    write_with(&classified, |w| write_buildings(&inv, w))?;
    let disc = out.join(DISCREPANCIES);
    write_with(&disc, |w| write_discrepancies(&report.discrepancies, w))?;
    let pred_rej = out.join(PREDICTION_REJECTIONS);
    write_with(&pred_rej, |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["row", "reason"]).map_err(csv_err)?;
        for r in &rejected {
            c.write_record([r.row.to_string(), r.reason.clone()]).map_err(csv_err)?;
        }
        c.flush()?;
        Ok(())
    })?;
    let rep = out.join(APPLY_REPORT);
    write_json(
        &rep,
        &json!({
            "applied": report.applied,
            "unknown": report.unknown,
            "unknown_rate": report.unknown_rate(),
            "unpredicted": report.unpredicted,
            "discrepancies": report.discrepancies.len(),
            "rejected_predictions": rejected.len(),
        }),
    )?;
    finish(
        "apply-predictions",
        cfg,
        StageFiles { inputs: vec![inv_path, pred_path.to_path_buf()], outputs: vec![classified, disc, pred_rej, rep] },
    )
}

pub fn evaluate(cfg: &PipelineConfig) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let pred_path = required(&cfg.predictions, "a prediction file", "predictions")?;
    let truth_path = required(&cfg.truth, "a truth table", "truth")?;
    let preds = load_predictions(pred_path)?;
    let truth = load_inventory(truth_path)?;
    let mut first: BTreeMap<&BuildingId, RoofClass> = BTreeMap::new();
    for p in &preds {
        first.entry(&p.building_id).or_insert_with(|| p.argmax());
    }
    let (mut t, mut p) = (Vec::new(), Vec::new());
    for b in truth.iter() {
        if let (Some(roof), Some(pred)) = (b.roof, first.get(&b.id)) {
            t.push(roof);
            p.push(*pred);
        }
    }
    if t.is_empty() {
        return Err(CliError::Validation("no building has both a truth label and a prediction".into()));
    }
    let cm = confusion(&t, &p)?;
    let m = metrics(&cm);
    let table = render_table(&m);
    print!("{table}");
    log::info!("evaluated {} labeled buildings; overall {:.4}", m.total, m.micro.f1);
    let (mp, cp, tp) = (out.join(METRICS), out.join(CONFUSION), out.join(METRICS_TABLE));
    write_with(&mp, |w| write_metrics_csv(&m, w))?;
    write_with(&cp, |w| write_confusion_csv(&cm, w))?;
    std::fs::write(&tp, table).map_err(|e| CliError::io(&tp, e))?;
    finish(
        "evaluate",
        cfg,
        StageFiles { inputs: vec![pred_path.to_path_buf(), truth_path.to_path_buf()], outputs: vec![mp, cp, tp] },
    )
}

pub fn sweep(cfg: &PipelineConfig, input: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, CLASSIFIED);
    let inv = load_inventory(&inv_path)?;
    let idx = NeighborIndex::from_inventory(&inv);
    let rows = radius_sweep(&idx, &inv.classified_roofs(), &cfg.sweep_radii, cfg.tie_break)?;
    for r in &rows {
        log::info!(
            "radius {} m: accuracy {}, missing {:.4}",
            r.radius_m,
            r.accuracy.map_or("n/a".into(), |a| format!("{a:.4}")),
            r.missing_fraction
        );
    }
    let path = out.join(SWEEP);
    write_with(&path, |w| write_sweep_csv(&rows, w))?;
    finish("sweep-radius", cfg, StageFiles { inputs: vec![inv_path], outputs: vec![path] })
}

fn neighbor_table(inv: &Inventory, radius: f64) -> Result<BTreeMap<BuildingId, NeighborFeatures>, CliError> {
    let idx = NeighborIndex::from_inventory(inv);
    Ok(all_neighbor_features(&idx, &inv.classified_roofs(), radius)?)
}

/// Accuracy on roof-absent buildings whose truth label is known.
fn held_out_accuracy(
    model: &TrainedModel,
    inv: &Inventory,
    truth: &Inventory,
    nf: &BTreeMap<BuildingId, NeighborFeatures>,
) -> Option<f64> {
    let (mut n, mut hits) = (0usize, 0usize);
    for b in inv.iter().filter(|b| b.valid_roof().is_none()) {
        let Some(label) = truth.get(&b.id).and_then(|t| t.valid_roof()).and_then(|r| model.target.label_of(r).ok()) else {
            continue;
        };
        n += 1;
        hits += usize::from(model.predict(&feature_row(b, nf.get(&b.id), &model.features)) == label);
    }
    (n > 0).then(|| hits as f64 / n as f64)
}

pub fn train(cfg: &PipelineConfig, input: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, CLASSIFIED);
    let inv = load_inventory(&inv_path)?;
    let truth = cfg.truth.as_deref().map(load_inventory).transpose()?;
    let nf = neighbor_table(&inv, cfg.radius_m)?;
    let deployed = cfg.model_config()?;
    let mut files = StageFiles { inputs: vec![inv_path], outputs: Vec::new() };
    if let Some(t) = &cfg.truth {
        files.inputs.push(t.clone());
    }
    for (target, model_name, cv_name) in
        [(Target::Type, MODEL_TYPE, CV_TYPE), (Target::Complexity, MODEL_COMPLEXITY, CV_COMPLEXITY)]
    {
        let set = build_training_set(&inv, &nf, target, &target.default_features())?;
        let mut rows = Vec::new();
        for kind in [ModelConfig::Forest(cfg.forest_config()), ModelConfig::Margin(cfg.margin_config())] {
            let cv = cross_validate(&set, &kind, cfg.cv_folds, cfg.seed)?;
            let model = TrainedModel::fit_set(&set, &kind, cfg.seed)?;
            let test_accuracy = truth.as_ref().and_then(|t| held_out_accuracy(&model, &inv, t, &nf));
            log::info!("{target} {}: {}-fold accuracy {:.4}", kind.name(), cfg.cv_folds, cv.mean_accuracy);
            if kind.name() == deployed.name() {
                let path = out.join(model_name);
                model.save(&path)?;
                files.outputs.push(path);
            }
            rows.push(AccuracyRow {
                model: kind.name().to_string(),
                study_area: cfg.study_area.clone(),
                cv_accuracy: cv.mean_accuracy,
                test_accuracy,
            });
        }
        let path = out.join(cv_name);
        write_with(&path, |w| write_accuracy_csv(&rows, w))?;
        files.outputs.push(path);
    }
    finish("train-impute", cfg, files)
}

fn load_model(path: &Path) -> Result<TrainedModel, CliError> {
    TrainedModel::load(path).map_err(|e| match e {
        roofinv::Error::Io(_) => CliError::MissingInput(format!("{}: cannot read model", path.display())),
        other => other.into(),
    })
}

pub fn impute(cfg: &PipelineConfig, input: &Option<PathBuf>, models_dir: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, CLASSIFIED);
    let dir = models_dir.clone().unwrap_or_else(|| cfg.out_dir.clone());
    let (type_path, complexity_path) = (dir.join(MODEL_TYPE), dir.join(MODEL_COMPLEXITY));
    let inv = load_inventory(&inv_path)?;
    let type_model = load_model(&type_path)?;
    let complexity_model = load_model(&complexity_path)?;
    let nf = neighbor_table(&inv, cfg.radius_m)?;
    let (inv, n) = impute_missing(inv, &nf, &type_model, &complexity_model)?;
    let remaining = inv.count_absent();
    if remaining != 0 {
        return Err(CliError::Internal(format!("{remaining} buildings remain roof-absent after imputation")));
    }
    let mut by_class = serde_json::Map::new();
    for class in RoofClass::VALID {
        let count = inv.iter().filter(|b| b.roof == Some(class) && b.roof_source == roofinv::RoofSource::Imputed).count();
        by_class.insert(class.code().into(), json!(count));
    }
    log::info!("imputed {n} roofs");
    let (ip, rp) = (out.join(IMPUTED), out.join(IMPUTE_REPORT));
    write_with(&ip, |w| write_buildings(&inv, w))?;
    write_json(&rp, &json!({ "imputed": n, "remaining_absent": remaining, "imputed_by_class": by_class }))?;
    finish(
        "impute",
        cfg,
        StageFiles { inputs: vec![inv_path, type_path, complexity_path], outputs: vec![ip, rp] },
    )
}

pub fn importance(cfg: &PipelineConfig, input: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, CLASSIFIED);
    let inv = load_inventory(&inv_path)?;
    let nf = neighbor_table(&inv, cfg.radius_m)?;
    let model_cfg = cfg.model_config()?;
    let mut files = StageFiles { inputs: vec![inv_path], outputs: Vec::new() };
    for (target, name) in [(Target::Type, IMPORTANCE_TYPE), (Target::Complexity, IMPORTANCE_COMPLEXITY)] {
        let set = build_training_set(&inv, &nf, target, &target.all_features())?;
        let (train_idx, val_idx) = train_validation_split(&set.labels, cfg.validation_fraction, cfg.seed);
        let val = set.subset(&val_idx);
        let model = TrainedModel::fit_set(&set.subset(&train_idx), &model_cfg, cfg.seed)?;
        let report = permutation_importance(&model, &val.rows, &val.labels, cfg.importance_repeats, cfg.seed);
        let top = report.ranked().first().map(|f| f.feature.name()).unwrap_or("none");
        log::info!("{target} importance: baseline {:.4}, top feature {top}", report.baseline);
        let path = out.join(name);
        write_with(&path, |w| write_importance_csv(&report, w))?;
        files.outputs.push(path);
    }
    finish("importance", cfg, files)
}

pub fn aggregate(cfg: &PipelineConfig, input: &Option<PathBuf>) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let inv_path = stage_input(cfg, input, IMPUTED);
    let inv = load_inventory(&inv_path)?;
    let summaries = tract_summaries(&inv);
    let mut files = StageFiles { inputs: vec![inv_path], outputs: Vec::new() };
    let tp = out.join(TRACT_REPORT);
    write_with(&tp, |w| write_tract_csv(&summaries, w))?;
    files.outputs.push(tp);
    for (filter, name) in
        [(SourceFilter::Classified, DISTRIBUTION_CLASSIFIED), (SourceFilter::ClassifiedAndImputed, DISTRIBUTION_IMPUTED)]
    {
        let d = city_distribution(&inv, filter);
        let p = out.join(name);
        write_with(&p, |w| write_distribution_csv(&d, w))?;
        files.outputs.push(p);
    }
    if let Some(tracts_path) = &cfg.tracts {
        let tracts = load_tracts(tracts_path)?;
        let export = export_map(&summaries, &tracts);
        log::info!(
            "map: {} tracts written, {} under the size threshold, {} without polygons",
            export.written.len(),
            export.excluded.len(),
            export.missing_polygons.len()
        );
        let mp = out.join(TRACT_MAP);
        let mut bytes = serde_json::to_vec(&export.document)?;
        bytes.push(b'\n');
        std::fs::write(&mp, bytes).map_err(|e| CliError::io(&mp, e))?;
        files.inputs.push(tracts_path.clone());
        files.outputs.push(mp);
    } else {
        log::warn!("no tract polygons configured; map export skipped");
    }
    finish("aggregate", cfg, files)
}

pub fn synth(cfg: &PipelineConfig, synth_cfg: &SynthConfig) -> Result<StageFiles, CliError> {
    let out = ensure_out(cfg)?;
    let city = generate(synth_cfg)?;
    let paths: SynthPaths = city.write_files(out)?;
    log::info!("generated {} buildings in {} clusters", city.inventory.len(), synth_cfg.n_clusters);
    let outputs = vec![paths.buildings, paths.predictions, paths.truth, paths.tracts, paths.config];
    finish("synth", cfg, StageFiles { inputs: Vec::new(), outputs })
}

/// All stages in workflow order. Fetching only happens when enabled; the
/// evaluation runs only when a truth table is configured.
pub fn run_all(cfg: &PipelineConfig) -> Result<StageFiles, CliError> {
    let mut all = StageFiles::default();
    let mut add = |f: StageFiles| all.outputs.extend(f.outputs);
    add(ingest(cfg)?);
    add(plan_imagery(cfg, &None)?);
    if cfg.fetch {
        add(fetch(cfg, &None)?);
    }
    add(apply(cfg, &None)?);
    if cfg.truth.is_some() {
        add(evaluate(cfg)?);
    }
    add(sweep(cfg, &None)?);
    add(train(cfg, &None)?);
    add(impute(cfg, &None, &None)?);
    add(importance(cfg, &None)?);
    add(aggregate(cfg, &None)?);
    let outputs = {
        let mut v = all.outputs.clone();
        v.sort();
        v.dedup();
        v
    };
    let mut inputs: Vec<PathBuf> = [&cfg.buildings, &cfg.tracts, &cfg.predictions, &cfg.truth].into_iter().flatten().cloned().collect();
    inputs.dedup();
    finish("run-all", cfg, StageFiles { inputs, outputs })
}
