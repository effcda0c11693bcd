//! Seeded synthetic cities with clustered roof styles.
//!
//! Clusters of buildings sit on a jittered grid. Each cluster draws a
//! dominant roof class; each building keeps it with probability `purity`,
//! otherwise takes a uniformly drawn class of the opposite gable/hip family.
//! An optional year rule then overrides the family of a fraction of
//! buildings: hip from `year_threshold` onwards, gable before. Complex roofs
//! are larger on average. Stories are drawn independently of everything
//! else and so carry no signal.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{write_predictions, PredictionRecord};
use crate::error::{DomainError, Result};
use crate::ingest::{tracts_to_geojson, write_buildings, TractPolygon};
use crate::inventory::{BuildingId, BuildingRecord, Inventory, LatLon, RoofSource, TractId};
use crate::kv::KvMap;
use crate::roof::{Complexity, RoofClass, RoofFamily, RoofFeatures};
use crate::spatial::EARTH_RADIUS_M;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_clusters: usize,
    pub buildings_per_cluster: usize,
    pub cluster_spacing_m: f64,
    pub intra_spacing_m: f64,
    /// Probability a building keeps its cluster's dominant class.
    pub purity: f64,
    /// Fraction of buildings whose prediction peaks on unknown.
    pub occlusion_rate: f64,
    /// Fraction of non-occluded predictions peaked on a wrong valid class.
    pub misclassification_rate: f64,
    pub year_min: i32,
    pub year_max: i32,
    pub year_threshold: i32,
    /// Fraction of buildings whose family is set by the year rule.
    pub year_effect: f64,
    pub area_simple_m2: f64,
    pub area_complex_m2: f64,
    /// Areas are scaled by a uniform factor in [1 - spread, 1 + spread].
    pub area_spread: f64,
    pub tract_size_m: f64,
    pub origin_lat: f64,
    pub origin_lon: f64,
    pub model_id: String,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            n_clusters: 100,
            buildings_per_cluster: 50,
            cluster_spacing_m: 500.0,
            intra_spacing_m: 20.0,
            purity: 0.9,
            occlusion_rate: 0.0,
            misclassification_rate: 0.0,
            year_min: 1950,
            year_max: 2020,
            year_threshold: 1990,
            year_effect: 0.0,
            area_simple_m2: 160.0,
            area_complex_m2: 260.0,
            area_spread: 0.3,
            tract_size_m: 300.0,
            origin_lat: 34.2,
            origin_lon: -77.9,
            model_id: "synthetic".into(),
        }
    }
}

const KEYS: [&str; 19] = [
    "seed",
    "n_clusters",
    "buildings_per_cluster",
    "cluster_spacing_m",
    "intra_spacing_m",
    "purity",
    "occlusion_rate",
    "misclassification_rate",
    "year_min",
    "year_max",
    "year_threshold",
    "year_effect",
    "area_simple_m2",
    "area_complex_m2",
    "area_spread",
    "tract_size_m",
    "origin_lat",
    "origin_lon",
    "model_id",
];

impl SynthConfig {
    pub fn validate(&self) -> Result<(), DomainError> {
        let bad = |m: &str| Err(DomainError::Invalid(m.to_string()));
        if self.n_clusters == 0 || self.buildings_per_cluster == 0 {
            return bad("need at least one cluster and one building per cluster");
        }
        if !(0.5..=1.0).contains(&self.purity) {
            return bad("purity must lie in [0.5, 1]");
        }
        if !(0.0..1.0).contains(&self.occlusion_rate) {
            return bad("occlusion_rate must lie in [0, 1)");
        }
        for (name, v) in [("misclassification_rate", self.misclassification_rate), ("year_effect", self.year_effect)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(DomainError::Invalid(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(0.0..1.0).contains(&self.area_spread) {
            return bad("area_spread must lie in [0, 1)");
        }
        for (name, v) in [
            ("cluster_spacing_m", self.cluster_spacing_m),
            ("intra_spacing_m", self.intra_spacing_m),
            ("tract_size_m", self.tract_size_m),
            ("area_simple_m2", self.area_simple_m2),
            ("area_complex_m2", self.area_complex_m2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DomainError::Invalid(format!("{name} must be positive")));
            }
        }
        if self.year_min > self.year_max {
            return bad("year_min exceeds year_max");
        }
        LatLon::new(self.origin_lat, self.origin_lon)?;
        Ok(())
    }

    pub fn to_kv(&self) -> KvMap {
        let mut m = KvMap::default();
        m.set("seed", self.seed);
        m.set("n_clusters", self.n_clusters);
        m.set("buildings_per_cluster", self.buildings_per_cluster);
        m.set("cluster_spacing_m", self.cluster_spacing_m);
        m.set("intra_spacing_m", self.intra_spacing_m);
        m.set("purity", self.purity);
        m.set("occlusion_rate", self.occlusion_rate);
        m.set("misclassification_rate", self.misclassification_rate);
        m.set("year_min", self.year_min);
        m.set("year_max", self.year_max);
        m.set("year_threshold", self.year_threshold);
        m.set("year_effect", self.year_effect);
        m.set("area_simple_m2", self.area_simple_m2);
        m.set("area_complex_m2", self.area_complex_m2);
        m.set("area_spread", self.area_spread);
        m.set("tract_size_m", self.tract_size_m);
        m.set("origin_lat", self.origin_lat);
        m.set("origin_lon", self.origin_lon);
        m.set("model_id", &self.model_id);
        m
    }

    /// Missing keys keep their defaults; unknown keys are an error.
    pub fn from_kv(m: &KvMap) -> crate::Result<SynthConfig> {
        m.check_keys(&KEYS)?;
        let mut c = SynthConfig::default();
        macro_rules! take {
            ($($field:ident),*) => {
                $( if let Some(v) = m.get(stringify!($field))? { c.$field = v; } )*
            };
        }
        take!(
            seed,
            n_clusters,
            buildings_per_cluster,
            cluster_spacing_m,
            intra_spacing_m,
            purity,
            occlusion_rate,
            misclassification_rate,
            year_min,
            year_max,
            year_threshold,
            year_effect,
            area_simple_m2,
            area_complex_m2,
            area_spread,
            tract_size_m,
            origin_lat,
            origin_lon,
            model_id
        );
        c.validate()?;
        Ok(c)
    }

    pub fn n_buildings(&self) -> usize {
        self.n_clusters * self.buildings_per_cluster
    }
}

#[derive(Debug, Clone)]
pub struct SynthCity {
    pub config: SynthConfig,
    /// Attributes only: no roofs, no tracts.
    pub inventory: Inventory,
    /// Same buildings with their true roofs as labeled truth.
    pub truth: Inventory,
    pub predictions: Vec<PredictionRecord>,
    pub tracts: Vec<TractPolygon>,
    /// Cluster index per building, in id order.
    pub cluster_of: Vec<usize>,
    pub dominant: Vec<RoofClass>,
}

fn grid_side(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

fn opposite_family(class: RoofClass) -> &'static [RoofClass] {
    use RoofClass::*;
    if class.is_gable().unwrap_or(true) {
        &[SimpleHip, CrossHip]
    } else {
        &[SimpleGable, SimpleCrossGable, ComplexCrossGable]
    }
}

/// Local east/north offsets in meters to coordinates.
fn offset(origin: LatLon, east: f64, north: f64) -> LatLon {
    let lat = origin.lat + (north / EARTH_RADIUS_M).to_degrees();
    let lon = origin.lon + (east / (EARTH_RADIUS_M * origin.lat.to_radians().cos())).to_degrees();
    LatLon { lat, lon }
}

pub fn generate(config: &SynthConfig) -> Result<SynthCity, DomainError> {
    config.validate()?;
    let cfg = config;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let origin = LatLon::new(cfg.origin_lat, cfg.origin_lon)?;
    let c_side = grid_side(cfg.n_clusters);
    let b_side = grid_side(cfg.buildings_per_cluster);
    let jitter = cfg.intra_spacing_m / 4.0;
    let half_extent = (b_side as f64 - 1.0) * cfg.intra_spacing_m / 2.0;

    let dominant: Vec<RoofClass> = (0..cfg.n_clusters).map(|_| *RoofClass::VALID.choose(&mut rng).expect("nonempty")).collect();
    let mut inventory = Inventory::new();
    let mut truth = Inventory::new();
    let mut predictions = Vec::new();
    let mut cluster_of = Vec::new();
    for (c, &dom) in dominant.iter().enumerate() {
        let cx = (c % c_side) as f64 * cfg.cluster_spacing_m;
        let cy = (c / c_side) as f64 * cfg.cluster_spacing_m;
        for k in 0..cfg.buildings_per_cluster {
            let bx = cx - half_extent + (k % b_side) as f64 * cfg.intra_spacing_m + rng.gen_range(-jitter..=jitter);
            let by = cy - half_extent + (k / b_side) as f64 * cfg.intra_spacing_m + rng.gen_range(-jitter..=jitter);
            let year_built = rng.gen_range(cfg.year_min..=cfg.year_max);

            let mut roof = if rng.gen_bool(cfg.purity) { dom } else { *opposite_family(dom).choose(&mut rng).expect("nonempty") };
            if cfg.year_effect > 0.0 && rng.gen_bool(cfg.year_effect) {
                let family = if year_built >= cfg.year_threshold { RoofFamily::Hip } else { RoofFamily::Gable };
                let f = roof.to_features()?;
                if f.family != family {
                    roof = RoofFeatures::new(family, f.complexity).to_class();
                }
            }
            let complex = roof.to_features()?.complexity == Complexity::Complex;
            let mean_area = if complex { cfg.area_complex_m2 } else { cfg.area_simple_m2 };
            let area = mean_area * rng.gen_range(1.0 - cfg.area_spread..=1.0 + cfg.area_spread);
            let value = (area * 1200.0 * rng.gen_range(0.85..1.15)).round();
            let stories = rng.gen_range(1..=3u32);

            let id = format!("b{:07}", cluster_of.len());
            let mut b = BuildingRecord::new(id.clone(), offset(origin, bx, by), year_built, (area * 100.0).round() / 100.0);
            b.building_value = Some(value);
            b.stories = Some(stories);
            let mut t = b.clone();
            t.set_roof(Some(roof), RoofSource::LabeledTruth);

            let predicted = if rng.gen_bool(cfg.occlusion_rate) {
                RoofClass::Unknown
            } else if cfg.misclassification_rate > 0.0 && rng.gen_bool(cfg.misclassification_rate) {
                let others: Vec<RoofClass> = RoofClass::VALID.iter().copied().filter(|&r| r != roof).collect();
                *others.choose(&mut rng).expect("nonempty")
            } else {
                roof
            };
            let peak = rng.gen_range(0.6..0.95);
            predictions.push(PredictionRecord::peaked(BuildingId(id), predicted, peak, &cfg.model_id));

            let _ = inventory.insert(b);
            let _ = truth.insert(t);
            cluster_of.push(c);
        }
    }
    inventory.provenance.source = format!("synthetic seed {}", cfg.seed);
    truth.provenance.source = inventory.provenance.source.clone();

    let tracts = tract_grid(cfg, origin, c_side, half_extent + jitter);
    Ok(SynthCity { config: cfg.clone(), inventory, truth, predictions, tracts, cluster_of, dominant })
}

/// Square tracts covering the city, offset from the cluster grid so that
/// tract edges cut through clusters.
fn tract_grid(cfg: &SynthConfig, origin: LatLon, c_side: usize, reach: f64) -> Vec<TractPolygon> {
    let rows = cfg.n_clusters.div_ceil(c_side);
    let min = -reach - cfg.tract_size_m / 3.0;
    let max_x = (c_side as f64 - 1.0) * cfg.cluster_spacing_m + reach;
    let max_y = (rows as f64 - 1.0) * cfg.cluster_spacing_m + reach;
    let nx = ((max_x - min) / cfg.tract_size_m).ceil() as usize;
    let ny = ((max_y - min) / cfg.tract_size_m).ceil() as usize;
    let mut out = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let x0 = min + i as f64 * cfg.tract_size_m;
            let y0 = min + j as f64 * cfg.tract_size_m;
            let (x1, y1) = (x0 + cfg.tract_size_m, y0 + cfg.tract_size_m);
            let ring: Vec<[f64; 2]> = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
                .iter()
                .map(|&(x, y)| {
                    let p = offset(origin, x, y);
                    [p.lon, p.lat]
                })
                .collect();
            out.push(TractPolygon { tract_id: TractId(format!("T{j:03}{i:03}")), rings: vec![ring] });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SynthPaths {
    pub buildings: PathBuf,
    pub predictions: PathBuf,
    pub truth: PathBuf,
    pub tracts: PathBuf,
    pub config: PathBuf,
}

impl SynthPaths {
    pub fn in_dir(dir: &Path) -> SynthPaths {
        SynthPaths {
            buildings: dir.join("buildings.csv"),
            predictions: dir.join("predictions.csv"),
            truth: dir.join("truth.csv"),
            tracts: dir.join("tracts.geojson"),
            config: dir.join("synth.cfg"),
        }
    }
}

impl SynthCity {
    pub fn write_files(&self, dir: &Path) -> crate::Result<SynthPaths> {
        std::fs::create_dir_all(dir)?;
        let paths = SynthPaths::in_dir(dir);
        write_buildings(&self.inventory, std::fs::File::create(&paths.buildings)?)?;
        write_buildings(&self.truth, std::fs::File::create(&paths.truth)?)?;
        write_predictions(&self.predictions, std::fs::File::create(&paths.predictions)?)?;
        let mut geo = serde_json::to_vec(&tracts_to_geojson(&self.tracts))?;
        geo.push(b'\n');
        std::fs::write(&paths.tracts, geo)?;
        std::fs::File::create(&paths.config)?.write_all(self.config.to_kv().render().as_bytes())?;
        Ok(paths)
    }

    /// Fraction of buildings carrying their cluster's dominant class.
    pub fn empirical_purity(&self) -> f64 {
        let hits = self
            .truth
            .iter()
            .zip(&self.cluster_of)
            .filter(|(b, &c)| b.roof == Some(self.dominant[c]))
            .count();
        hits as f64 / self.truth.len().max(1) as f64
    }
}
