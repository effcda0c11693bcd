//! Pipeline configuration: defaults, a flat key=value file, then flags.

use std::path::{Path, PathBuf};

use roofinv::imagery::{CropConfig, FetchLimits, PlanConfig, Provider};
use roofinv::impute::{ForestConfig, MarginConfig, ModelConfig};
use roofinv::ingest::AreaUnit;
use roofinv::kv::KvMap;
use roofinv::spatial::{TieBreak, DEFAULT_RADIUS_M, DEFAULT_SWEEP_RADII_M};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub buildings: Option<PathBuf>,
    pub tracts: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub cache_dir: PathBuf,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub radius_m: f64,
    pub sweep_radii: Vec<f64>,
    pub tie_break: TieBreak,
    pub area_unit: AreaUnit,
    pub image_size: u32,
    pub crop_factor: f64,
    pub min_extent_m: f64,
    pub max_extent_m: f64,
    pub rate: f64,
    pub burst: u32,
    pub parallel: usize,
    pub max_retries: u32,
    pub model: String,
    pub n_trees: usize,
    pub min_leaf: usize,
    pub max_features: Option<usize>,
    pub max_depth: Option<usize>,
    pub margin_lambda: f64,
    pub margin_epochs: usize,
    pub cv_folds: usize,
    pub importance_repeats: usize,
    pub validation_fraction: f64,
    pub study_area: String,
    pub fetch: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let forest = ForestConfig::default();
        let margin = MarginConfig::default();
        let limits = FetchLimits::default();
        let crop = CropConfig::default();
        PipelineConfig {
            buildings: None,
            tracts: None,
            predictions: None,
            truth: None,
            cache_dir: PathBuf::from("cache"),
            out_dir: PathBuf::from("out"),
            seed: 42,
            radius_m: DEFAULT_RADIUS_M,
            sweep_radii: DEFAULT_SWEEP_RADII_M.to_vec(),
            tie_break: TieBreak::Gable,
            area_unit: AreaUnit::SquareMeters,
            image_size: PlanConfig::default().image_size_px,
            crop_factor: crop.factor,
            min_extent_m: crop.min_extent_m,
            max_extent_m: crop.max_extent_m,
            rate: limits.rate_per_sec,
            burst: limits.burst,
            parallel: limits.parallel,
            max_retries: limits.max_retries,
            model: "forest".into(),
            n_trees: forest.n_trees,
            min_leaf: forest.min_leaf,
            max_features: forest.max_features,
            max_depth: forest.max_depth,
            margin_lambda: margin.lambda,
            margin_epochs: margin.epochs,
            cv_folds: 10,
            importance_repeats: 10,
            validation_fraction: 0.25,
            study_area: "study-area".into(),
            fetch: false,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_radii(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|r| r.trim().parse::<f64>().map_err(|e| invalid(format!("bad radius {r:?}: {e}"))))
        .collect()
}

fn parse_tie(s: &str) -> Result<TieBreak, CliError> {
    match s {
        "gable" => Ok(TieBreak::Gable),
        "hip" => Ok(TieBreak::Hip),
        _ => Err(invalid(format!("tie_break must be gable or hip, got {s:?}"))),
    }
}

fn parse_unit(s: &str) -> Result<AreaUnit, CliError> {
    match s {
        "m2" => Ok(AreaUnit::SquareMeters),
        "sqft" => Ok(AreaUnit::SquareFeet),
        _ => Err(invalid(format!("area_unit must be m2 or sqft, got {s:?}"))),
    }
}

fn opt_usize(s: &str) -> Result<Option<usize>, CliError> {
    if s.is_empty() || s == "auto" || s == "none" {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|e| invalid(format!("bad count {s:?}: {e}")))
}

const KEYS: [&str; 31] = [
    "buildings",
    "tracts",
    "predictions",
    "truth",
    "cache_dir",
    "out_dir",
    "seed",
    "radius_m",
    "sweep_radii",
    "tie_break",
    "area_unit",
    "image_size",
    "crop_factor",
    "min_extent_m",
    "max_extent_m",
    "rate",
    "burst",
    "parallel",
    "max_retries",
    "model",
    "n_trees",
    "min_leaf",
    "max_features",
    "max_depth",
    "margin_lambda",
    "margin_epochs",
    "cv_folds",
    "importance_repeats",
    "validation_fraction",
    "study_area",
    "fetch",
];

impl PipelineConfig {
    /// Applies a key=value file. Relative paths resolve against `base`.
    pub fn apply_kv(&mut self, kv: &KvMap, base: &Path) -> Result<(), CliError> {
        kv.check_keys(&KEYS)?;
        let path = |k: &str| kv.get_str(k).map(|v| base.join(v));
        macro_rules! num {
            ($($field:ident),*) => {
                $( if let Some(v) = kv.get(stringify!($field))? { self.$field = v; } )*
            };
        }
        if let Some(p) = path("buildings") {
            self.buildings = Some(p);
        }
        if let Some(p) = path("tracts") {
            self.tracts = Some(p);
        }
        if let Some(p) = path("predictions") {
            self.predictions = Some(p);
        }
        if let Some(p) = path("truth") {
            self.truth = Some(p);
        }
        if let Some(p) = path("cache_dir") {
            self.cache_dir = p;
        }
        if let Some(p) = path("out_dir") {
            self.out_dir = p;
        }
        num!(
            seed,
            radius_m,
            image_size,
            crop_factor,
            min_extent_m,
            max_extent_m,
            rate,
            burst,
            parallel,
            max_retries,
            n_trees,
            min_leaf,
            margin_lambda,
            margin_epochs,
            cv_folds,
            importance_repeats,
            validation_fraction,
            fetch
        );
        if let Some(s) = kv.get_str("sweep_radii") {
            self.sweep_radii = parse_radii(s)?;
        }
        if let Some(s) = kv.get_str("tie_break") {
            self.tie_break = parse_tie(s)?;
        }
        if let Some(s) = kv.get_str("area_unit") {
            self.area_unit = parse_unit(s)?;
        }
        if let Some(s) = kv.get_str("max_features") {
            self.max_features = opt_usize(s)?;
        }
        if let Some(s) = kv.get_str("max_depth") {
            self.max_depth = opt_usize(s)?;
        }
        if let Some(s) = kv.get_str("model") {
            self.model = s.to_string();
        }
        if let Some(s) = kv.get_str("study_area") {
            self.study_area = s.to_string();
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.radius_m > 0.0) {
            return Err(invalid("radius_m must be positive"));
        }
        if self.sweep_radii.is_empty() || self.sweep_radii.iter().any(|r| !(*r > 0.0)) {
            return Err(invalid("sweep_radii must be positive"));
        }
        if !(self.rate > 0.0) || self.burst == 0 || self.parallel == 0 {
            return Err(invalid("rate, burst and parallel must be positive"));
        }
        if self.cv_folds < 2 {
            return Err(invalid("cv_folds must be at least 2"));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(invalid("validation_fraction must lie in (0, 1)"));
        }
        if self.n_trees == 0 || self.importance_repeats == 0 {
            return Err(invalid("n_trees and importance_repeats must be positive"));
        }
        self.model_config()?;
        Ok(())
    }

    pub fn forest_config(&self) -> ForestConfig {
        ForestConfig {
            n_trees: self.n_trees,
            min_leaf: self.min_leaf,
            max_features: self.max_features,
            max_depth: self.max_depth,
            ..ForestConfig::default()
        }
    }

    pub fn margin_config(&self) -> MarginConfig {
        MarginConfig { lambda: self.margin_lambda, epochs: self.margin_epochs, ..MarginConfig::default() }
    }

    /// The model used for imputation.
    pub fn model_config(&self) -> Result<ModelConfig, CliError> {
        match self.model.as_str() {
            "forest" => Ok(ModelConfig::Forest(self.forest_config())),
            "margin" => Ok(ModelConfig::Margin(self.margin_config())),
            other => Err(invalid(format!("model must be forest or margin, got {other:?}"))),
        }
    }

    pub fn plan_config(&self) -> PlanConfig {
        PlanConfig {
            provider: Provider::default(),
            image_size_px: self.image_size,
            crop: CropConfig { factor: self.crop_factor, min_extent_m: self.min_extent_m, max_extent_m: self.max_extent_m },
        }
    }

    pub fn fetch_limits(&self) -> FetchLimits {
        FetchLimits {
            rate_per_sec: self.rate,
            burst: self.burst,
            parallel: self.parallel,
            max_retries: self.max_retries,
            ..FetchLimits::default()
        }
    }

    /// Settings that affect outputs, as sorted key=value text. Paths are
    /// reduced to file names so that relocating a run does not change it.
    pub fn canonical(&self) -> String {
        let name = |p: &Option<PathBuf>| {
            p.as_ref().and_then(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
        };
        let opt = |v: Option<usize>| v.map_or("auto".to_string(), |v| v.to_string());
        let mut kv = KvMap::default();
        kv.set("buildings", name(&self.buildings));
        kv.set("tracts", name(&self.tracts));
        kv.set("predictions", name(&self.predictions));
        kv.set("truth", name(&self.truth));
        kv.set("seed", self.seed);
        kv.set("radius_m", self.radius_m);
        kv.set("sweep_radii", self.sweep_radii.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
        kv.set("tie_break", if self.tie_break == TieBreak::Gable { "gable" } else { "hip" });
        kv.set("area_unit", if self.area_unit == AreaUnit::SquareFeet { "sqft" } else { "m2" });
        kv.set("image_size", self.image_size);
        kv.set("crop_factor", self.crop_factor);
        kv.set("min_extent_m", self.min_extent_m);
        kv.set("max_extent_m", self.max_extent_m);
        kv.set("rate", self.rate);
        kv.set("burst", self.burst);
        kv.set("parallel", self.parallel);
        kv.set("max_retries", self.max_retries);
        kv.set("model", &self.model);
        kv.set("n_trees", self.n_trees);
        kv.set("min_leaf", self.min_leaf);
        kv.set("max_features", opt(self.max_features));
        kv.set("max_depth", opt(self.max_depth));
        kv.set("margin_lambda", self.margin_lambda);
        kv.set("margin_epochs", self.margin_epochs);
        kv.set("cv_folds", self.cv_folds);
        kv.set("importance_repeats", self.importance_repeats);
        kv.set("validation_fraction", self.validation_fraction);
        kv.set("study_area", &self.study_area);
        kv.set("fetch", self.fetch);
        kv.render()
    }
}
