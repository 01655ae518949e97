//! Seeded Monte-Carlo campaigns over the built-in cavity presets.
//!
//! A [`ScenarioConfig`] is a sparse, JSON-friendly description; [`ScenarioConfig::resolve`]
//! fills the gaps from its preset and validates it into a [`Scenario`].
//! Trial `i` draws from a ChaCha8 stream selected by `(seed, i)`, so results do
//! not depend on how trials are scheduled across threads.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{build_ensemble, CavityParams, ChannelEnsemble, RxGrid};
use crate::link::{focus_field, trdma_link, SpaceTimeField};
use crate::metrics::{
    focusing_gain, isi_ratio_db, sir, spatial_profile, temporal_fwhm, trdma_isi_db, FocusingReport,
};
use crate::precoding::{tr_filters, TrFilterBank};
use crate::signal::{db, gen_chirp, sound_channel, Cir, Waveform};
use crate::{Error, Result, C64};

/// Samples kept on each side of the focusing instant in temporal profiles,
/// in units of the oversampling factor.
pub const TEMPORAL_WINDOW_SYMBOLS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Sub6ghz,
    Mmwave,
    Subthz,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Sub6ghz, Preset::Mmwave, Preset::Subthz];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Sub6ghz => "sub6ghz",
            Preset::Mmwave => "mmwave",
            Preset::Subthz => "subthz",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Sub6ghz => {
                "2.5 GHz reverberant room, full-sphere arrivals, 30 cm line of receivers"
            }
            Preset::Mmwave => "36 GHz, 2 GHz band, 40 degree arrival cone, two-user TRDMA layout",
            Preset::Subthz => {
                "273.6 GHz, 3 GHz band, 35 degree arrival cone, 6 mm line of receivers"
            }
        }
    }

    pub fn params(self) -> CavityParams {
        match self {
            Preset::Sub6ghz => CavityParams {
                carrier_hz: 2.5e9,
                bandwidth_hz: 100e6,
                n_paths: 2000,
                decay_time_s: 0.64e-6,
                aperture_half_angle_rad: PI,
                max_delay_s: 1.28e-6,
                oversample: 4,
            },
            Preset::Mmwave => CavityParams {
                carrier_hz: 36e9,
                bandwidth_hz: 2e9,
                n_paths: 2000,
                decay_time_s: 40e-9,
                aperture_half_angle_rad: 40f64.to_radians(),
                max_delay_s: 80e-9,
                oversample: 4,
            },
            Preset::Subthz => CavityParams {
                carrier_hz: 273.6e9,
                bandwidth_hz: 3e9,
                n_paths: 2000,
                decay_time_s: 25e-9,
                aperture_half_angle_rad: 35f64.to_radians(),
                max_delay_s: 50e-9,
                oversample: 4,
            },
        }
    }

    pub fn grid(self) -> GridSpec {
        match self {
            Preset::Sub6ghz => GridSpec {
                start_m: 0.0,
                stop_m: 0.30,
                step_m: 0.01,
            },
            Preset::Mmwave => GridSpec {
                start_m: -0.02,
                stop_m: 0.02,
                step_m: 0.001,
            },
            Preset::Subthz => GridSpec {
                start_m: -3e-3,
                stop_m: 3e-3,
                step_m: 0.3e-3,
            },
        }
    }

    pub fn n_tx(self) -> usize {
        match self {
            Preset::Sub6ghz => 8,
            Preset::Mmwave | Preset::Subthz => 1,
        }
    }

    pub fn targets_m(self) -> Vec<f64> {
        match self {
            Preset::Sub6ghz => vec![0.10],
            Preset::Mmwave | Preset::Subthz => vec![0.0],
        }
    }

    pub fn users_m(self) -> Vec<f64> {
        match self {
            Preset::Mmwave => vec![-0.01, 0.01],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start_m: f64,
    pub stop_m: f64,
    pub step_m: f64,
}

fn default_chirp_duration() -> f64 {
    1e-6
}

fn default_sounding_snr() -> Option<f64> {
    Some(30.0)
}

/// How the transmitter learns the channel. `snr_db: null` sounds noiselessly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum CsiMode {
    Perfect,
    Sounded {
        #[serde(default = "default_chirp_duration")]
        chirp_duration_s: f64,
        #[serde(default = "default_sounding_snr")]
        snr_db: Option<f64>,
    },
}

impl CsiMode {
    pub fn sounded_default() -> Self {
        CsiMode::Sounded {
            chirp_duration_s: default_chirp_duration(),
            snr_db: default_sounding_snr(),
        }
    }
}

/// Sparse scenario description. Unset fields come from the preset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub preset: Option<Preset>,
    /// Replaces the preset's cavity entirely.
    pub params: Option<CavityParams>,
    pub bandwidth_hz: Option<f64>,
    pub n_tx: Option<usize>,
    pub grid: Option<GridSpec>,
    pub n_trials: Option<usize>,
    pub seed: Option<u64>,
    pub csi: Option<CsiMode>,
    /// Focusing targets; more than one focuses on all of them at once.
    pub targets_m: Option<Vec<f64>>,
    /// TRDMA user positions; two or more switch the run to multi-user mode.
    pub users_m: Option<Vec<f64>>,
    pub total_energy: Option<f64>,
    pub symbol_period_samples: Option<usize>,
    /// Receiver SNR relative to the spatial peak; absent means noiseless.
    pub rx_snr_db: Option<f64>,
    /// Also simulate the unprecoded chirp transmission.
    pub baseline: Option<bool>,
    pub output_dir: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl ScenarioConfig {
    pub fn from_preset(preset: Preset) -> Self {
        Self {
            preset: Some(preset),
            ..Self::default()
        }
    }

    /// Fields set in `top` win.
    pub fn merged(mut self, top: ScenarioConfig) -> Self {
        overlay!(
            self,
            top,
            preset,
            params,
            bandwidth_hz,
            n_tx,
            grid,
            n_trials,
            seed,
            csi,
            targets_m,
            users_m,
            total_energy,
            symbol_period_samples,
            rx_snr_db,
            baseline,
            output_dir
        );
        self
    }

    pub fn resolve(&self) -> Result<Scenario> {
        let preset = self.preset.unwrap_or(Preset::Sub6ghz);
        let mut params = self.params.unwrap_or_else(|| preset.params());
        if let Some(b) = self.bandwidth_hz {
            params.bandwidth_hz = b;
        }
        params.validate()?;
        let spec = self.grid.unwrap_or_else(|| preset.grid());
        let grid = RxGrid::uniform(spec.start_m, spec.stop_m, spec.step_m)?;
        let n_tx = self.n_tx.unwrap_or_else(|| preset.n_tx());
        if n_tx == 0 {
            return Err(Error::InvalidParameter("n_tx must be >= 1".into()));
        }
        let n_trials = self.n_trials.unwrap_or(1);
        if n_trials == 0 {
            return Err(Error::InvalidParameter("n_trials must be >= 1".into()));
        }
        let users_m = self.users_m.clone().unwrap_or_else(|| preset.users_m());
        if users_m.len() == 1 {
            return Err(Error::InvalidParameter(
                "TRDMA needs at least two users".into(),
            ));
        }
        let users = indices(&grid, &users_m)?;
        let targets_m = match &self.targets_m {
            Some(t) => t.clone(),
            None if !users_m.is_empty() => vec![users_m[0]],
            None => preset.targets_m(),
        };
        if targets_m.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one target is required".into(),
            ));
        }
        let targets = indices(&grid, &targets_m)?;
        let total_energy = self.total_energy.unwrap_or(1.0);
        if !(total_energy > 0.0 && total_energy.is_finite()) {
            return Err(Error::InvalidParameter(
                "total energy must be positive".into(),
            ));
        }
        let symbol_period_samples = self.symbol_period_samples.unwrap_or(4 * params.oversample);
        if symbol_period_samples == 0 {
            return Err(Error::InvalidParameter(
                "symbol period must be >= 1 sample".into(),
            ));
        }
        let csi = self.csi.unwrap_or(CsiMode::Perfect);
        if let CsiMode::Sounded {
            chirp_duration_s, ..
        } = csi
        {
            gen_chirp(
                params.bandwidth_hz,
                chirp_duration_s,
                params.sample_rate_hz(),
            )?;
        }
        Ok(Scenario {
            preset: self.preset.filter(|_| self.params.is_none()),
            params,
            grid_spec: spec,
            grid,
            n_tx,
            n_trials,
            seed: self.seed.unwrap_or(0),
            csi,
            targets,
            users,
            total_energy,
            symbol_period_samples,
            rx_snr_db: self.rx_snr_db,
            baseline: self.baseline.unwrap_or(false),
        })
    }
}

fn indices(grid: &RxGrid, positions: &[f64]) -> Result<Vec<usize>> {
    let idx = positions
        .iter()
        .map(|&x| grid.index_of(x))
        .collect::<Result<Vec<_>>>()?;
    for (i, t) in idx.iter().enumerate() {
        if idx[..i].contains(t) {
            return Err(Error::InvalidTarget(format!(
                "position {} m listed twice",
                positions[i]
            )));
        }
    }
    Ok(idx)
}

/// Fully resolved, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub preset: Option<Preset>,
    pub params: CavityParams,
    pub grid_spec: GridSpec,
    pub grid: RxGrid,
    pub n_tx: usize,
    pub n_trials: usize,
    pub seed: u64,
    pub csi: CsiMode,
    /// Grid indices of the focusing targets; the first is the measured one.
    pub targets: Vec<usize>,
    /// Grid indices of TRDMA users (empty for single-user runs).
    pub users: Vec<usize>,
    pub total_energy: f64,
    pub symbol_period_samples: usize,
    pub rx_snr_db: Option<f64>,
    pub baseline: bool,
}

/// Everything one trial contributes to the campaign outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub report: FocusingReport,
    /// Power at the focusing instant per grid position, dB re the spatial peak.
    pub spatial_power_db: Vec<f64>,
    /// `(time re focusing instant, dB re peak)` at the measured target.
    pub temporal_profile: Vec<(f64, f64)>,
    /// `|y − sqrt(E·Σ‖h‖²)| / sqrt(E·Σ‖h‖²)` at the target; only for perfect
    /// CSI with a single target.
    pub peak_identity_error: Option<f64>,
    /// `[v][u]` power (dB) user `u` receives from user `v`'s precoder at the
    /// focusing instant.
    pub crosstalk_db: Option<Vec<Vec<f64>>>,
    /// Record-averaged received power per position without precoding.
    pub baseline_power: Option<Vec<f64>>,
    /// Record-averaged received power per position with TR precoding.
    pub tr_mean_power: Vec<f64>,
}

/// Ensemble summary written next to per-trial reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub fc_hz: f64,
    pub b_hz: f64,
    pub nt: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean_temporal_fwhm_s: Option<f64>,
    pub mean_spatial_fwhm_m: Option<f64>,
    pub mean_focusing_gain_db: Option<f64>,
    pub mean_sir_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub scenario: Scenario,
    pub trials: Vec<TrialOutcome>,
}

fn finite_mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values.filter(|v| v.is_finite()) {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

impl Campaign {
    pub fn reports(&self) -> Vec<&FocusingReport> {
        self.trials.iter().map(|t| &t.report).collect()
    }

    /// Means skip metrics that came out undefined (for example an edge peak)
    /// and infinite SIRs.
    pub fn summary(&self) -> Summary {
        let r = self.reports();
        Summary {
            fc_hz: self.scenario.params.carrier_hz,
            b_hz: self.scenario.params.bandwidth_hz,
            nt: self.scenario.n_tx,
            trials: self.trials.len(),
            seed: self.scenario.seed,
            mean_temporal_fwhm_s: finite_mean(r.iter().map(|x| x.temporal_fwhm_s)),
            mean_spatial_fwhm_m: finite_mean(r.iter().map(|x| x.spatial_fwhm_m)),
            mean_focusing_gain_db: finite_mean(r.iter().map(|x| x.focusing_gain_db)),
            mean_sir_db: finite_mean(
                r.iter()
                    .filter_map(|x| x.sir_db.as_ref())
                    .flatten()
                    .copied(),
            ),
        }
    }

    /// Mean over trials of the target's linear peak power.
    pub fn mean_peak_power(&self) -> f64 {
        let n = self.trials.len() as f64;
        self.trials
            .iter()
            .map(|t| 10f64.powf(t.report.peak_power_db / 10.0))
            .sum::<f64>()
            / n
    }

    /// Trial-averaged spatial profile (linear average of the per-trial
    /// normalized powers), in dB re its own peak.
    pub fn mean_spatial_power_db(&self) -> Vec<f64> {
        mean_profile_db(self.trials.iter().map(|t| t.spatial_power_db.as_slice()))
    }

    /// Trial-averaged temporal profile on the common window.
    pub fn mean_temporal_profile(&self) -> Vec<(f64, f64)> {
        let times: Vec<f64> = self.trials[0]
            .temporal_profile
            .iter()
            .map(|p| p.0)
            .collect();
        let rows: Vec<Vec<f64>> = self
            .trials
            .iter()
            .map(|t| t.temporal_profile.iter().map(|p| p.1).collect())
            .collect();
        let power = mean_profile_db(rows.iter().map(Vec::as_slice));
        times.into_iter().zip(power).collect()
    }

    /// Trial-averaged no-TR power per position, if the baseline was run.
    pub fn mean_baseline_power(&self) -> Option<Vec<f64>> {
        let rows: Vec<&Vec<f64>> = self
            .trials
            .iter()
            .filter_map(|t| t.baseline_power.as_ref())
            .collect();
        (rows.len() == self.trials.len()).then(|| mean_linear(rows.iter().map(|r| r.as_slice())))
    }

    pub fn mean_tr_power(&self) -> Vec<f64> {
        mean_linear(self.trials.iter().map(|t| t.tr_mean_power.as_slice()))
    }
}

fn mean_linear<'a>(rows: impl Iterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut acc: Vec<f64> = Vec::new();
    let mut n = 0usize;
    for row in rows {
        if acc.is_empty() {
            acc = vec![0.0; row.len()];
        }
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
        n += 1;
    }
    acc.iter().map(|a| a / n as f64).collect()
}

fn mean_profile_db<'a>(rows: impl Iterator<Item = &'a [f64]>) -> Vec<f64> {
    let lin: Vec<Vec<f64>> = rows
        .map(|r| r.iter().map(|d| 10f64.powf(d / 10.0)).collect())
        .collect();
    let mean = mean_linear(lin.iter().map(Vec::as_slice));
    let max = mean.iter().copied().fold(0.0, f64::max);
    mean.iter().map(|p| db(p / max)).collect()
}

/// Ratio (dB) of the strongest to the average entry of a power profile.
pub fn peak_to_mean_db(power: &[f64]) -> f64 {
    let max = power.iter().copied().fold(0.0, f64::max);
    let mean = power.iter().sum::<f64>() / power.len() as f64;
    db(max / mean)
}

/// Generator for trial `trial` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Per-antenna channels the transmitter will precode for the given positions,
/// either exact or estimated by chirp sounding.
fn known_cirs<R: Rng + ?Sized>(
    scenario: &Scenario,
    ensemble: &ChannelEnsemble,
    rx: usize,
    probe: Option<&Waveform>,
    rng: &mut R,
) -> Result<Vec<Cir>> {
    match (scenario.csi, probe) {
        (CsiMode::Sounded { snr_db, .. }, Some(probe)) => (0..ensemble.n_tx())
            .map(|a| sound_channel(ensemble.cir(a, rx), probe, snr_db, rng))
            .collect(),
        _ => Ok(ensemble.cirs_at(rx)),
    }
}

/// Sum of the per-antenna CIRs over several positions.
fn superpose(sets: &[Vec<Cir>]) -> Result<Vec<Cir>> {
    let first = &sets[0];
    first
        .iter()
        .enumerate()
        .map(|(a, c)| {
            let mut taps = c.taps().to_vec();
            for s in &sets[1..] {
                for (t, v) in taps.iter_mut().zip(s[a].taps()) {
                    *t += v;
                }
            }
            Cir::new(taps, c.sample_rate_hz(), c.carrier_hz())
        })
        .collect()
}

/// Unprecoded transmission: every antenna sends the same chirp spanning the
/// CIR length, sharing the energy budget.
pub fn baseline_bank(
    params: &CavityParams,
    n_tx: usize,
    total_energy: f64,
) -> Result<TrFilterBank> {
    let fs = params.sample_rate_hz();
    let l = params.n_taps();
    let mut chirp = gen_chirp(params.bandwidth_hz, l as f64 / fs, fs)?.into_samples();
    chirp.resize(l, C64::new(0.0, 0.0));
    TrFilterBank::from_filters(vec![chirp; n_tx], total_energy, fs)
}

fn record_mean_power(field: &SpaceTimeField) -> Vec<f64> {
    field
        .rows
        .iter()
        .map(|r| r.iter().map(|v| v.norm_sqr()).sum::<f64>() / r.len() as f64)
        .collect()
}

fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// Runs one trial: draw the cavity, acquire CSI, precode, propagate, measure.
pub fn run_trial(scenario: &Scenario, trial: usize) -> Result<TrialOutcome> {
    let mut rng = trial_rng(scenario.seed, trial);
    let params = &scenario.params;
    let ensemble = build_ensemble(params, &scenario.grid, scenario.n_tx, &mut rng)?;
    let probe = match scenario.csi {
        CsiMode::Sounded {
            chirp_duration_s, ..
        } => Some(gen_chirp(
            params.bandwidth_hz,
            chirp_duration_s,
            params.sample_rate_hz(),
        )?),
        CsiMode::Perfect => None,
    };

    let target = scenario.targets[0];
    let target_sets = scenario
        .targets
        .iter()
        .map(|&t| known_cirs(scenario, &ensemble, t, probe.as_ref(), &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let bank = tr_filters(&superpose(&target_sets)?, scenario.total_energy)?;
    let field = focus_field(&bank, &ensemble, scenario.rx_snr_db, &mut rng)?;
    let peak = field.peak_index;
    let row = &field.rows[target];

    let peak_power = row[peak].norm_sqr();
    let peak_identity_error = (scenario.csi == CsiMode::Perfect
        && scenario.targets.len() == 1
        && scenario.rx_snr_db.is_none())
    .then(|| {
        let h_energy: f64 = ensemble.cirs_at(target).iter().map(Cir::energy).sum();
        let want = (scenario.total_energy * h_energy).sqrt();
        (row[peak] - want).norm() / want
    });

    let profile = spatial_profile(&field, peak);
    let spatial_fwhm_m = profile.as_ref().map(|p| p.fwhm_m).unwrap_or(f64::NAN);
    let spatial_power_db = {
        let power: Vec<f64> = field.rows.iter().map(|r| r[peak].norm_sqr()).collect();
        let max = power.iter().copied().fold(0.0, f64::max);
        power.iter().map(|p| db(p / max)).collect()
    };

    let half = TEMPORAL_WINDOW_SYMBOLS * params.oversample;
    let lo = peak.saturating_sub(half);
    let hi = (peak + half).min(row.len() - 1);
    let temporal_profile = (lo..=hi)
        .map(|n| (field.time_s(n), db(row[n].norm_sqr() / peak_power)))
        .collect();

    let mut isi = isi_ratio_db(row, peak, scenario.symbol_period_samples);
    let (sir_db, crosstalk_db) = if scenario.users.len() >= 2 {
        let banks = scenario
            .users
            .iter()
            .map(|&u| {
                let cirs = known_cirs(scenario, &ensemble, u, probe.as_ref(), &mut rng)?;
                tr_filters(&cirs, scenario.total_energy)
            })
            .collect::<Result<Vec<_>>>()?;
        let t = trdma_link(
            &banks,
            &ensemble,
            &scenario.users,
            scenario.symbol_period_samples,
        )?;
        isi = trdma_isi_db(&t)[0];
        let xt = t
            .per_user_rx
            .iter()
            .map(|from_v| {
                from_v
                    .iter()
                    .map(|rx| db(rx[t.peak_index].norm_sqr()))
                    .collect()
            })
            .collect();
        (Some(sir(&t)?), Some(xt))
    } else {
        (None, None)
    };

    let baseline_power = if scenario.baseline {
        let b = baseline_bank(params, scenario.n_tx, scenario.total_energy)?;
        Some(record_mean_power(&focus_field(
            &b, &ensemble, None, &mut rng,
        )?))
    } else {
        None
    };

    Ok(TrialOutcome {
        report: FocusingReport {
            trial,
            fc_hz: params.carrier_hz,
            b_hz: params.bandwidth_hz,
            nt: scenario.n_tx,
            seed: scenario.seed,
            peak_power_db: db(peak_power),
            temporal_fwhm_s: or_nan(temporal_fwhm(row, field.sample_rate_hz)),
            spatial_fwhm_m,
            focusing_gain_db: or_nan(focusing_gain(&field, target)),
            sir_db,
            isi_ratio_db: isi,
        },
        spatial_power_db,
        temporal_profile,
        peak_identity_error,
        crosstalk_db,
        baseline_power,
        tr_mean_power: record_mean_power(&field),
    })
}

/// Runs every trial (in parallel) and returns them in trial order.
pub fn run_campaign(scenario: &Scenario) -> Result<Campaign> {
    let trials = (0..scenario.n_trials)
        .into_par_iter()
        .map(|i| run_trial(scenario, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Campaign {
        scenario: scenario.clone(),
        trials,
    })
}

/// Figure layouts reproduced by the `reproduce` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Two simultaneous foci at 7.5 and 20 cm, 100 MHz, 8 antennas.
    Fig2a,
    /// Single focus at 10 cm, 400 MHz, 8 antennas.
    Fig2b,
    /// Two TRDMA users at ±1 cm on the 36 GHz cavity.
    Fig3,
    /// 273.6 GHz focusing with and without precoding.
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig2a, Figure::Fig2b, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    pub fn config(self) -> ScenarioConfig {
        match self {
            Figure::Fig2a => ScenarioConfig {
                bandwidth_hz: Some(100e6),
                n_tx: Some(8),
                // finer step so that 7.5 cm lies on the grid
                grid: Some(GridSpec {
                    start_m: 0.0,
                    stop_m: 0.30,
                    step_m: 0.005,
                }),
                targets_m: Some(vec![0.075, 0.20]),
                ..ScenarioConfig::from_preset(Preset::Sub6ghz)
            },
            Figure::Fig2b => ScenarioConfig {
                bandwidth_hz: Some(400e6),
                n_tx: Some(8),
                targets_m: Some(vec![0.10]),
                ..ScenarioConfig::from_preset(Preset::Sub6ghz)
            },
            Figure::Fig3 => ScenarioConfig::from_preset(Preset::Mmwave),
            Figure::Fig4 => ScenarioConfig {
                baseline: Some(true),
                ..ScenarioConfig::from_preset(Preset::Subthz)
            },
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown figure '{s}'")))
    }
}
