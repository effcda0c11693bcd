mod config;
mod error;
mod manifest;
mod stages;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use roofinv::ingest::AreaUnit;
use roofinv::kv::KvMap;
use roofinv::synth::SynthConfig;

use config::PipelineConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "roofinv", version, about = "Roof-type inventory pipeline")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

/// Shared options; any of them overrides the config file.
#[derive(Args, Debug, Default)]
struct Global {
    /// Flat key=value config file; relative paths inside resolve against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    buildings: Option<PathBuf>,
    #[arg(long, global = true)]
    tracts: Option<PathBuf>,
    #[arg(long, global = true)]
    predictions: Option<PathBuf>,
    #[arg(long, global = true)]
    truth: Option<PathBuf>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Inventory read by the stage instead of the previous stage's output.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Neighborhood search radius in meters.
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Comma-separated radii for the sweep.
    #[arg(long, global = true)]
    radii: Option<String>,
    /// Building areas in the input table are square feet.
    #[arg(long, global = true)]
    sqft: bool,
    /// Requests per second.
    #[arg(long, global = true)]
    rate: Option<f64>,
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[arg(long, global = true)]
    image_size: Option<u32>,
    #[arg(long, global = true)]
    crop_factor: Option<f64>,
    /// Imputation model: forest or margin.
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true)]
    n_trees: Option<usize>,
    /// Debug-level logging.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the buildings table and assign census tracts.
    Ingest,
    /// Plan one static-map request per building.
    PlanImagery,
    /// Download planned images into the cache.
    Fetch,
    /// Merge classifier predictions into the inventory.
    ApplyPredictions,
    /// Confusion matrix and precision/recall/F1 against a truth table.
    Evaluate,
    /// Dominant-type baseline accuracy across search radii.
    SweepRadius,
    /// Cross-validate and train the type and complexity models.
    TrainImpute,
    /// Fill roof-absent buildings with model predictions.
    Impute {
        /// Directory holding the trained model files.
        #[arg(long)]
        models_dir: Option<PathBuf>,
    },
    /// Permutation feature importance on a held-out split.
    Importance,
    /// Tract and city roof distributions plus the tract map.
    Aggregate,
    /// Generate a synthetic city.
    Synth(SynthArgs),
    /// Every stage in workflow order.
    RunAll {
        /// Also download imagery (needs the provider credential).
        #[arg(long)]
        fetch: bool,
    },
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Generator settings as key=value.
    #[arg(long)]
    synth_config: Option<PathBuf>,
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long)]
    per_cluster: Option<usize>,
    #[arg(long)]
    purity: Option<f64>,
    #[arg(long)]
    occlusion: Option<f64>,
    #[arg(long)]
    year_effect: Option<f64>,
}

fn build_config(g: &Global) -> Result<PipelineConfig, CliError> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(PathBuf::from).unwrap_or_default();
        cfg.apply_kv(&KvMap::parse(&text)?, &base)?;
    }
    macro_rules! over {
        ($($flag:ident => $field:ident),*) => {
            $( if let Some(v) = &g.$flag { cfg.$field = v.clone().into(); } )*
        };
    }
    over!(buildings => buildings, tracts => tracts, predictions => predictions, truth => truth);
    if let Some(v) = &g.out_dir {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = &g.cache_dir {
        cfg.cache_dir = v.clone();
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if let Some(v) = g.radius {
        cfg.radius_m = v;
    }
    if let Some(v) = &g.radii {
        let mut kv = KvMap::default();
        kv.set("sweep_radii", v);
        cfg.apply_kv(&kv, &PathBuf::new())?;
    }
    if g.sqft {
        cfg.area_unit = AreaUnit::SquareFeet;
    }
    if let Some(v) = g.rate {
        cfg.rate = v;
    }
    if let Some(v) = g.parallel {
        cfg.parallel = v;
    }
    if let Some(v) = g.image_size {
        cfg.image_size = v;
    }
    if let Some(v) = g.crop_factor {
        cfg.crop_factor = v;
    }
    if let Some(v) = &g.model {
        cfg.model = v.clone();
    }
    if let Some(v) = g.n_trees {
        cfg.n_trees = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn synth_config(args: &SynthArgs, g: &Global) -> Result<SynthConfig, CliError> {
    let mut c = match &args.synth_config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            SynthConfig::from_kv(&KvMap::parse(&text)?)?
        }
        None => SynthConfig::default(),
    };
    if let Some(v) = g.seed {
        c.seed = v;
    }
    if let Some(v) = args.clusters {
        c.n_clusters = v;
    }
    if let Some(v) = args.per_cluster {
        c.buildings_per_cluster = v;
    }
    if let Some(v) = args.purity {
        c.purity = v;
    }
    if let Some(v) = args.occlusion {
        c.occlusion_rate = v;
    }
    if let Some(v) = args.year_effect {
        c.year_effect = v;
    }
    c.validate()?;
    Ok(c)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = build_config(&cli.global)?;
    let input = &cli.global.input;
    match cli.command {
        Command::Ingest => stages::ingest(&cfg),
        Command::PlanImagery => stages::plan_imagery(&cfg, input),
        Command::Fetch => stages::fetch(&cfg, input),
        Command::ApplyPredictions => stages::apply(&cfg, input),
        Command::Evaluate => stages::evaluate(&cfg),
        Command::SweepRadius => stages::sweep(&cfg, input),
        Command::TrainImpute => stages::train(&cfg, input),
        Command::Impute { models_dir } => stages::impute(&cfg, input, &models_dir),
        Command::Importance => stages::importance(&cfg, input),
        Command::Aggregate => stages::aggregate(&cfg, input),
        Command::Synth(args) => {
            let sc = synth_config(&args, &cli.global)?;
            stages::synth(&cfg, &sc)
        }
        Command::RunAll { fetch } => {
            cfg.fetch |= fetch;
            stages::run_all(&cfg)
        }
    }
    .map(|_| ())
}

fn init_logging(verbose: bool) {
    let level = if verbose { "debug" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format(|buf, record| {
            writeln!(buf, "level={} target={} msg=\"{}\"", record.level().as_str().to_lowercase(), record.target(), record.args())
        })
        .target(env_logger::Target::Stderr)
        .init();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.global.verbose);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
