//! Experiment driver behind the `trfocus` binary.
//!
//! Output files for a run directory:
//!
//! | file | content |
//! |------|---------|
//! | `config.json` | effective scenario after merging presets, file and flags |
//! | `summary.json` | ensemble means |
//! | `reports.json` | one report per trial |
//! | `spatial_profile.csv` | trial-averaged profile (empty `trial` column) |
//! | `spatial_trials.csv` | per-trial profiles |
//! | `temporal_profile.csv`, `temporal_trials.csv` | same, over time at the target |
//! | `crosstalk.csv` | multi-user runs: power each user receives from each precoder |
//! | `baseline_spatial.csv`, `baseline.json` | runs with the no-TR baseline |

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use trfocus_core::channel::{write_ensemble, EnsembleEncoding};
use trfocus_core::experiment::{peak_to_mean_db, trial_rng};
use trfocus_core::signal::db;
use trfocus_core::{
    build_ensemble, run_campaign, Campaign, CsiMode, Error, Figure, GridSpec, Preset,
    ScenarioConfig,
};

pub const THREADS_ENV: &str = "TRFOCUS_THREADS";

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "invalid configuration: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(m) => Failure::Io(m),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "trfocus",
    version,
    about = "Time-reversal focusing experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte-Carlo campaign.
    Run(Box<RunArgs>),
    /// Regenerate the data behind one of the reference figures.
    Reproduce(ReproduceArgs),
    /// List the built-in presets.
    Presets {
        /// Print full parameter sets as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CsiArg {
    Perfect,
    Sounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Text,
    Binary,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON scenario file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Bandwidth in Hz (e.g. 100e6).
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Number of transmit antennas.
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub csi: Option<CsiArg>,
    /// Sounding chirp duration in seconds.
    #[arg(long)]
    pub chirp_duration: Option<f64>,
    /// Sounding SNR in dB.
    #[arg(long, conflicts_with = "noiseless_sounding")]
    pub sounding_snr_db: Option<f64>,
    #[arg(long)]
    pub noiseless_sounding: bool,
    /// Focusing target in meters; repeat to focus on several points at once.
    #[arg(long = "target", allow_negative_numbers = true)]
    pub targets: Vec<f64>,
    /// TRDMA user position in meters; give at least two.
    #[arg(long = "user", allow_negative_numbers = true)]
    pub users: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_stop: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Total transmit energy shared by all antennas.
    #[arg(long)]
    pub energy: Option<f64>,
    #[arg(long)]
    pub symbol_period: Option<usize>,
    /// Receiver SNR (dB re the spatial peak); noiseless if absent.
    #[arg(long, allow_negative_numbers = true)]
    pub rx_snr_db: Option<f64>,
    /// Also simulate the unprecoded chirp transmission.
    #[arg(long)]
    pub baseline: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the first trial's channel ensemble to this file.
    #[arg(long)]
    pub export_ensemble: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub export_encoding: EncodingArg,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// fig2a, fig2b, fig3 or fig4.
    pub figure: String,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory (default: `trfocus-<figure>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n >= 1).ok_or_else(|| {
        Failure::Config(format!(
            "{THREADS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

pub fn execute(cli: Cli) -> Outcome<()> {
    match cli.command {
        Command::Run(args) => run(&args),
        Command::Reproduce(args) => reproduce(&args),
        Command::Presets { json } => presets(json),
    }
}

fn load_config(path: &Path) -> Outcome<ScenarioConfig> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// File config (if any) overlaid with the flags.
pub fn build_config(args: &RunArgs) -> Outcome<ScenarioConfig> {
    let base = match &args.config {
        Some(p) => load_config(p)?,
        None => ScenarioConfig::default(),
    };
    let preset = args
        .preset
        .as_deref()
        .map(str::parse::<Preset>)
        .transpose()?;
    let grid = match (args.grid_start, args.grid_stop, args.grid_step) {
        (None, None, None) => None,
        (start, stop, step) => {
            let fallback = base
                .grid
                .unwrap_or_else(|| preset.or(base.preset).unwrap_or(Preset::Sub6ghz).grid());
            Some(GridSpec {
                start_m: start.unwrap_or(fallback.start_m),
                stop_m: stop.unwrap_or(fallback.stop_m),
                step_m: step.unwrap_or(fallback.step_m),
            })
        }
    };
    let mut csi = match args.csi {
        Some(CsiArg::Perfect) => Some(CsiMode::Perfect),
        Some(CsiArg::Sounded) => match base.csi {
            Some(c @ CsiMode::Sounded { .. }) => Some(c),
            _ => Some(CsiMode::sounded_default()),
        },
        None => base.csi,
    };
    let tweaks =
        args.chirp_duration.is_some() || args.sounding_snr_db.is_some() || args.noiseless_sounding;
    if tweaks {
        match &mut csi {
            Some(CsiMode::Sounded {
                chirp_duration_s,
                snr_db,
            }) => {
                if let Some(d) = args.chirp_duration {
                    *chirp_duration_s = d;
                }
                if let Some(s) = args.sounding_snr_db {
                    *snr_db = Some(s);
                }
                if args.noiseless_sounding {
                    *snr_db = None;
                }
            }
            _ => {
                return Err(Failure::Config(
                    "sounding options need sounded CSI (--csi sounded)".into(),
                ))
            }
        }
    }
    let flags = ScenarioConfig {
        preset,
        params: None,
        bandwidth_hz: args.bandwidth,
        n_tx: args.nt,
        grid,
        n_trials: args.trials,
        seed: args.seed,
        csi,
        targets_m: (!args.targets.is_empty()).then(|| args.targets.clone()),
        users_m: (!args.users.is_empty()).then(|| args.users.clone()),
        total_energy: args.energy,
        symbol_period_samples: args.symbol_period,
        rx_snr_db: args.rx_snr_db,
        baseline: args.baseline.then_some(true),
        output_dir: args.out.as_ref().map(|p| p.display().to_string()),
    };
    Ok(base.merged(flags))
}

fn run(args: &RunArgs) -> Outcome<()> {
    let config = build_config(args)?;
    let scenario = config.resolve()?;
    let out = PathBuf::from(
        config
            .output_dir
            .clone()
            .unwrap_or_else(|| "trfocus-out".into()),
    );
    let campaign = run_campaign(&scenario)?;
    write_outputs(&out, &config, &campaign)?;
    if let Some(path) = &args.export_ensemble {
        let mut rng = trial_rng(scenario.seed, 0);
        let ensemble = build_ensemble(&scenario.params, &scenario.grid, scenario.n_tx, &mut rng)?;
        let encoding = match args.export_encoding {
            EncodingArg::Text => EnsembleEncoding::Text,
            EncodingArg::Binary => EnsembleEncoding::Binary,
        };
        let file = create(path)?;
        write_ensemble(
            &ensemble,
            Some(scenario.seed),
            encoding,
            BufWriter::new(file),
        )?;
    }
    print_summary(&out, &campaign);
    Ok(())
}

fn reproduce(args: &ReproduceArgs) -> Outcome<()> {
    let figure: Figure = args.figure.parse()?;
    if args.trials == 0 {
        return Err(Failure::Config("trials must be >= 1".into()));
    }
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("trfocus-{}", figure.name())));
    let config = ScenarioConfig {
        n_trials: Some(args.trials),
        seed: Some(args.seed),
        output_dir: Some(out.display().to_string()),
        ..figure.config()
    };
    let campaign = run_campaign(&config.resolve()?)?;
    write_outputs(&out, &config, &campaign)?;
    print_summary(&out, &campaign);
    Ok(())
}

fn print_summary(out: &Path, campaign: &Campaign) {
    let s = campaign.summary();
    let show = |v: Option<f64>, scale: f64, unit: &str| match v {
        Some(x) => format!("{:.3} {unit}", x * scale),
        None => "n/a".into(),
    };
    println!("wrote {}", out.display());
    println!("  trials                {}", s.trials);
    println!(
        "  temporal FWHM         {}",
        show(s.mean_temporal_fwhm_s, 1e9, "ns")
    );
    println!(
        "  spatial FWHM          {}",
        show(s.mean_spatial_fwhm_m, 1e3, "mm")
    );
    println!(
        "  focusing gain         {}",
        show(s.mean_focusing_gain_db, 1.0, "dB")
    );
    if s.mean_sir_db.is_some() {
        println!("  SIR                   {}", show(s.mean_sir_db, 1.0, "dB"));
    }
    if let Some(b) = campaign.mean_baseline_power() {
        println!("  no-TR peak-to-mean    {:.3} dB", peak_to_mean_db(&b));
    }
}

fn presets(json: bool) -> Outcome<()> {
    if json {
        #[derive(Serialize)]
        struct Entry {
            name: &'static str,
            description: &'static str,
            params: trfocus_core::CavityParams,
            grid: GridSpec,
            n_tx: usize,
            targets_m: Vec<f64>,
            users_m: Vec<f64>,
        }
        let entries: Vec<Entry> = Preset::ALL
            .into_iter()
            .map(|p| Entry {
                name: p.name(),
                description: p.description(),
                params: p.params(),
                grid: p.grid(),
                n_tx: p.n_tx(),
                targets_m: p.targets_m(),
                users_m: p.users_m(),
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&entries).map_err(|e| Failure::Io(e.to_string()))?
        );
        return Ok(());
    }
    println!(
        "{:<9} {:>10} {:>8} {:>9} {:>9} {:>24} {:>3}",
        "preset", "fc", "B", "cone", "decay", "grid", "nt"
    );
    for p in Preset::ALL {
        let c = p.params();
        let g = p.grid();
        println!(
            "{:<9} {:>6.1} GHz {:>4} MHz {:>5.0} deg {:>6.0} ns {:>24} {:>3}",
            p.name(),
            c.carrier_hz / 1e9,
            c.bandwidth_hz / 1e6,
            c.aperture_half_angle_rad.to_degrees(),
            c.decay_time_s * 1e9,
            format!("{}..{} m / {} m", g.start_m, g.stop_m, g.step_m),
            p.n_tx()
        );
        println!("          {}", p.description());
    }
    Ok(())
}

fn create(path: &Path) -> Outcome<File> {
    File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Outcome<()> {
    let mut w = BufWriter::new(create(path)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn csv_writer(path: &Path) -> Outcome<csv::Writer<File>> {
    Ok(csv::Writer::from_writer(create(path)?))
}

/// Writes every output file of a campaign into `dir`.
pub fn write_outputs(dir: &Path, config: &ScenarioConfig, campaign: &Campaign) -> Outcome<()> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let scenario = &campaign.scenario;
    write_json(&dir.join("config.json"), config)?;
    write_json(&dir.join("summary.json"), &campaign.summary())?;
    write_json(&dir.join("reports.json"), &campaign.reports())?;

    let positions = scenario.grid.positions_m();
    let fs_hz = scenario.params.sample_rate_hz();
    let profile_time = (scenario.params.n_taps() - 1) as f64 / fs_hz;
    let spatial_header = ["trial", "position_m", "power_db", "peak_time_s"];
    let temporal_header = ["trial", "time_s", "power_db"];

    let mut w = csv_writer(&dir.join("spatial_profile.csv"))?;
    w.write_record(spatial_header)?;
    for (x, p) in positions.iter().zip(campaign.mean_spatial_power_db()) {
        w.write_record([
            "".into(),
            x.to_string(),
            p.to_string(),
            profile_time.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = csv_writer(&dir.join("spatial_trials.csv"))?;
    w.write_record(spatial_header)?;
    for (i, t) in campaign.trials.iter().enumerate() {
        for (x, p) in positions.iter().zip(&t.spatial_power_db) {
            w.write_record([
                i.to_string(),
                x.to_string(),
                p.to_string(),
                profile_time.to_string(),
            ])?;
        }
    }
    w.flush()?;

    let mut w = csv_writer(&dir.join("temporal_profile.csv"))?;
    w.write_record(temporal_header)?;
    for (t, p) in campaign.mean_temporal_profile() {
        w.write_record(["".into(), t.to_string(), p.to_string()])?;
    }
    w.flush()?;

    let mut w = csv_writer(&dir.join("temporal_trials.csv"))?;
    w.write_record(temporal_header)?;
    for (i, t) in campaign.trials.iter().enumerate() {
        for (time, p) in &t.temporal_profile {
            w.write_record([i.to_string(), time.to_string(), p.to_string()])?;
        }
    }
    w.flush()?;

    if campaign.trials.iter().any(|t| t.crosstalk_db.is_some()) {
        let mut w = csv_writer(&dir.join("crosstalk.csv"))?;
        w.write_record(["trial", "from_user", "to_user", "power_db"])?;
        for (i, t) in campaign.trials.iter().enumerate() {
            for (v, row) in t.crosstalk_db.iter().flatten().enumerate() {
                for (u, p) in row.iter().enumerate() {
                    w.write_record([i.to_string(), v.to_string(), u.to_string(), p.to_string()])?;
                }
            }
        }
        w.flush()?;
    }

    if let Some(baseline) = campaign.mean_baseline_power() {
        let tr = campaign.mean_tr_power();
        let focus = campaign.mean_spatial_power_db();
        let b_max = baseline.iter().copied().fold(0.0, f64::max);
        let mut w = csv_writer(&dir.join("baseline_spatial.csv"))?;
        w.write_record(["position_m", "tr_focus_power_db", "no_tr_power_db"])?;
        for ((x, f), b) in positions.iter().zip(&focus).zip(&baseline) {
            w.write_record([x.to_string(), f.to_string(), db(b / b_max).to_string()])?;
        }
        w.flush()?;
        #[derive(Serialize)]
        struct BaselineSummary {
            tr_focus_peak_to_mean_db: f64,
            tr_record_peak_to_mean_db: f64,
            no_tr_peak_to_mean_db: f64,
        }
        let focus_lin: Vec<f64> = focus.iter().map(|d| 10f64.powf(d / 10.0)).collect();
        write_json(
            &dir.join("baseline.json"),
            &BaselineSummary {
                tr_focus_peak_to_mean_db: peak_to_mean_db(&focus_lin),
                tr_record_peak_to_mean_db: peak_to_mean_db(&tr),
                no_tr_peak_to_mean_db: peak_to_mean_db(&baseline),
            },
        )?;
    }
    Ok(())
}
