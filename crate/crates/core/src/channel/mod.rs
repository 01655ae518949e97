//! Diffuse-field multipath channels over a line of receiver positions.
//!
//! Each transmit antenna sees an independent set of plane waves arriving at
//! the receive region. A receiver displaced by `x` along the grid axis `û`
//! sees path `p` delayed by `τ_p + x·(û·d_p)/c`, and the band-limited CIR is
//!
//! `h[n] = Σ_p a_p · exp(−j2πf_c τ_p(x)) · sinc(B(n/f_s − τ_p(x)))`.
//!
//! Arrival directions are uniform on a spherical cap about the boresight
//! `+z`; the grid axis is expected to be perpendicular to it.

mod bessel;
mod export;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::signal::Cir;
use crate::{Error, Result, C64, SPEED_OF_LIGHT};

pub use bessel::{j0, j1};
pub use export::{read_ensemble, write_ensemble, EnsembleEncoding, EnsembleHeader};

/// Half-width of the truncated sinc interpolation kernel, in units of `1/B`.
pub const SINC_HALF_WIDTH: usize = 16;

pub const BORESIGHT: [f64; 3] = [0.0, 0.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    pub delay_s: f64,
    /// Unit arrival direction.
    pub direction: [f64; 3],
    pub amplitude: C64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathSet {
    pub paths: Vec<Path>,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub n_paths: usize,
    /// Exponential power-decay constant of the delay profile.
    pub decay_time_s: f64,
    /// Half-angle of the arrival-direction cone; `π` is the full sphere.
    pub aperture_half_angle_rad: f64,
    pub max_delay_s: f64,
    /// `f_s = oversample · B`.
    pub oversample: usize,
}

impl CavityParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("carrier_hz", self.carrier_hz)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        positive("decay_time_s", self.decay_time_s)?;
        positive("max_delay_s", self.max_delay_s)?;
        positive("aperture_half_angle_rad", self.aperture_half_angle_rad)?;
        if self.aperture_half_angle_rad > PI {
            return Err(Error::InvalidParameter(format!(
                "aperture half-angle must be <= π, got {}",
                self.aperture_half_angle_rad
            )));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidParameter("n_paths must be >= 1".into()));
        }
        if self.oversample == 0 {
            return Err(Error::InvalidParameter("oversample must be >= 1".into()));
        }
        Ok(())
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.oversample as f64 * self.bandwidth_hz
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Tap count `L`: the delay spread plus room for the kernel tail.
    pub fn n_taps(&self) -> usize {
        (self.max_delay_s * self.sample_rate_hz()).ceil() as usize
            + SINC_HALF_WIDTH * self.oversample
            + 1
    }

    /// Number of `1/B` delay bins spanned by the delay profile.
    pub fn resolvable_taps(&self) -> f64 {
        self.bandwidth_hz * self.max_delay_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RxGrid {
    positions_m: Vec<f64>,
    axis: [f64; 3],
}

impl RxGrid {
    pub fn new(positions_m: Vec<f64>, axis: [f64; 3]) -> Result<Self> {
        if positions_m.is_empty() {
            return Err(Error::InvalidParameter("grid has no positions".into()));
        }
        if positions_m.iter().any(|p| !p.is_finite())
            || positions_m.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidParameter(
                "grid positions must be finite and strictly increasing".into(),
            ));
        }
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "grid axis must be unit-norm, got {norm}"
            )));
        }
        Ok(Self { positions_m, axis })
    }

    /// `start, start+step, …` up to `stop` inclusive, along `+x`.
    pub fn uniform(start_m: f64, stop_m: f64, step_m: f64) -> Result<Self> {
        if !(step_m > 0.0) || !(stop_m >= start_m) {
            return Err(Error::InvalidParameter(format!(
                "invalid grid spec {start_m}..{stop_m} step {step_m}"
            )));
        }
        let n = ((stop_m - start_m) / step_m + 1e-9).floor() as usize + 1;
        // snapped to 1 pm so that decimal grids print as written
        let positions = (0..n)
            .map(|i| ((start_m + i as f64 * step_m) * 1e12).round() / 1e12)
            .collect();
        Self::new(positions, [1.0, 0.0, 0.0])
    }

    pub fn positions_m(&self) -> &[f64] {
        &self.positions_m
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.positions_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions_m.is_empty()
    }

    /// Index of the grid point at `position_m` (tolerance 1e-6 of the
    /// smallest spacing, or 1 nm for single-point grids).
    pub fn index_of(&self, position_m: f64) -> Result<usize> {
        let spacing = self
            .positions_m
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let tol = if spacing.is_finite() {
            1e-6 * spacing
        } else {
            1e-9
        };
        self.positions_m
            .iter()
            .position(|p| (p - position_m).abs() <= tol)
            .ok_or_else(|| Error::InvalidTarget(format!("{position_m} m is not on the grid")))
    }

    fn contains(&self, position_m: f64) -> bool {
        let first = self.positions_m[0];
        let last = self.positions_m[self.positions_m.len() - 1];
        let tol = 1e-9 * (1.0 + first.abs().max(last.abs()));
        position_m >= first - tol && position_m <= last + tol
    }
}

/// CIR table indexed `[tx antenna][rx position]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEnsemble {
    cirs: Vec<Vec<Cir>>,
    params: CavityParams,
    grid: RxGrid,
}

impl ChannelEnsemble {
    pub fn new(cirs: Vec<Vec<Cir>>, params: CavityParams, grid: RxGrid) -> Result<Self> {
        params.validate()?;
        if cirs.is_empty() {
            return Err(Error::DimensionMismatch(
                "ensemble needs at least one antenna".into(),
            ));
        }
        let fs = params.sample_rate_hz();
        let n_taps = cirs[0].first().map(Cir::len).unwrap_or(0);
        for row in &cirs {
            if row.len() != grid.len() {
                return Err(Error::DimensionMismatch(format!(
                    "antenna row has {} CIRs for {} grid positions",
                    row.len(),
                    grid.len()
                )));
            }
            for c in row {
                if c.len() != n_taps {
                    return Err(Error::DimensionMismatch("CIR tap counts differ".into()));
                }
                crate::signal::check_rates(c.sample_rate_hz(), fs)?;
            }
        }
        if (n_taps as f64) / fs < params.max_delay_s {
            return Err(Error::DimensionMismatch(format!(
                "{n_taps} taps do not cover the {} s delay spread",
                params.max_delay_s
            )));
        }
        Ok(Self { cirs, params, grid })
    }

    pub fn cir(&self, tx: usize, rx: usize) -> &Cir {
        &self.cirs[tx][rx]
    }

    /// CIRs of every antenna towards receive position `rx`.
    pub fn cirs_at(&self, rx: usize) -> Vec<Cir> {
        self.cirs.iter().map(|row| row[rx].clone()).collect()
    }

    pub fn cirs(&self) -> &[Vec<Cir>] {
        &self.cirs
    }

    pub fn params(&self) -> &CavityParams {
        &self.params
    }

    pub fn grid(&self) -> &RxGrid {
        &self.grid
    }

    pub fn n_tx(&self) -> usize {
        self.cirs.len()
    }

    pub fn n_rx(&self) -> usize {
        self.grid.len()
    }

    pub fn n_taps(&self) -> usize {
        self.cirs[0][0].len()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.params.sample_rate_hz()
    }
}

/// Mean of `exp(−τ/τ_d)` for `τ` uniform on `[0, max_delay]`.
fn mean_decay_weight(params: &CavityParams) -> f64 {
    let r = params.max_delay_s / params.decay_time_s;
    (1.0 - (-r).exp()) / r
}

/// Draws one antenna's path set.
///
/// Amplitude variances follow `exp(−τ/τ_d)` and are scaled so that the
/// expected CIR energy is 1 (each sampled kernel carries energy `oversample`).
pub fn draw_paths<R: Rng + ?Sized>(params: &CavityParams, rng: &mut R) -> Result<PathSet> {
    params.validate()?;
    let cos_min = params.aperture_half_angle_rad.cos();
    let norm = params.n_paths as f64 * params.oversample as f64 * mean_decay_weight(params);
    let paths = (0..params.n_paths)
        .map(|_| {
            let delay_s = rng.random::<f64>() * params.max_delay_s;
            let cos_t = 1.0 - rng.random::<f64>() * (1.0 - cos_min);
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let phi = 2.0 * PI * rng.random::<f64>();
            let direction = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
            let variance = (-delay_s / params.decay_time_s).exp() / norm;
            let sigma = (variance / 2.0).sqrt();
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Path {
                delay_s,
                direction,
                amplitude: C64::new(re * sigma, im * sigma),
            }
        })
        .collect();
    Ok(PathSet { paths })
}

/// `sin(π r / os)` and `cos(π r / os)` for `r ∈ [0, 2·os)`.
struct PhaseTable {
    sin: Vec<f64>,
    cos: Vec<f64>,
}

impl PhaseTable {
    fn new(oversample: usize) -> Self {
        let period = 2 * oversample;
        let (sin, cos) = (0..period)
            .map(|r| (PI * r as f64 / oversample as f64).sin_cos())
            .unzip();
        Self { sin, cos }
    }
}

fn accumulate_path(
    taps: &mut [C64],
    amplitude: C64,
    delay_s: f64,
    params: &CavityParams,
    table: &PhaseTable,
) {
    let os = params.oversample;
    let u0 = params.bandwidth_hz * delay_s;
    let centre = u0 * os as f64;
    let radius = (SINC_HALF_WIDTH * os) as f64;
    let lo = (centre - radius).ceil().max(0.0) as usize;
    let hi_f = (centre + radius).floor();
    if hi_f < 0.0 {
        return;
    }
    let hi = (hi_f as usize).min(taps.len().saturating_sub(1));
    if lo > hi {
        return;
    }
    let weight = amplitude * C64::from_polar(1.0, -2.0 * PI * params.carrier_hz * delay_s);
    let (s0, c0) = (PI * u0).sin_cos();
    let period = 2 * os;
    let inv_os = 1.0 / os as f64;
    let mut r = lo % period;
    for (n, tap) in (lo..hi + 1).zip(&mut taps[lo..hi + 1]) {
        let arg = n as f64 * inv_os - u0;
        let k = if arg.abs() < 1e-12 {
            1.0
        } else {
            // sin(πn/os − πu0)
            (table.sin[r] * c0 - table.cos[r] * s0) / (PI * arg)
        };
        *tap += weight * k;
        r += 1;
        if r == period {
            r = 0;
        }
    }
}

/// Path delay seen at `position_m` along `axis`.
fn delay_at(path: &Path, position_m: f64, axis: &[f64; 3]) -> f64 {
    let proj: f64 = axis.iter().zip(&path.direction).map(|(a, d)| a * d).sum();
    path.delay_s + position_m * proj / SPEED_OF_LIGHT
}

fn synthesize_taps(
    paths: &PathSet,
    position_m: f64,
    axis: &[f64; 3],
    params: &CavityParams,
    table: &PhaseTable,
) -> Vec<C64> {
    let mut taps = vec![C64::new(0.0, 0.0); params.n_taps()];
    for p in &paths.paths {
        accumulate_path(
            &mut taps,
            p.amplitude,
            delay_at(p, position_m, axis),
            params,
            table,
        );
    }
    taps
}

/// Band-limited CIR observed at `position_m` on `grid`.
pub fn synthesize_cir(
    paths: &PathSet,
    grid: &RxGrid,
    position_m: f64,
    params: &CavityParams,
) -> Result<Cir> {
    params.validate()?;
    if !grid.contains(position_m) {
        return Err(Error::InvalidParameter(format!(
            "position {position_m} m lies outside the grid span"
        )));
    }
    let table = PhaseTable::new(params.oversample);
    let taps = synthesize_taps(paths, position_m, &grid.axis, params, &table);
    Cir::new(taps, params.sample_rate_hz(), params.carrier_hz)
}

/// Draws `n_tx` independent path sets (sequentially from `rng`) and
/// synthesizes every (antenna, position) CIR.
pub fn build_ensemble<R: Rng + ?Sized>(
    params: &CavityParams,
    grid: &RxGrid,
    n_tx: usize,
    rng: &mut R,
) -> Result<ChannelEnsemble> {
    params.validate()?;
    if n_tx == 0 {
        return Err(Error::InvalidParameter("n_tx must be >= 1".into()));
    }
    let path_sets = (0..n_tx)
        .map(|_| draw_paths(params, rng))
        .collect::<Result<Vec<_>>>()?;
    let table = PhaseTable::new(params.oversample);
    let fs = params.sample_rate_hz();
    let n_rx = grid.len();
    let flat: Vec<Cir> = (0..n_tx * n_rx)
        .into_par_iter()
        .map(|i| {
            let (tx, rx) = (i / n_rx, i % n_rx);
            let taps = synthesize_taps(
                &path_sets[tx],
                grid.positions_m[rx],
                &grid.axis,
                params,
                &table,
            );
            Cir::new(taps, fs, params.carrier_hz)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut it = flat.into_iter();
    let cirs = (0..n_tx)
        .map(|_| it.by_ref().take(n_rx).collect())
        .collect();
    ChannelEnsemble::new(cirs, *params, grid.clone())
}

fn sinc_u(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sin() / u
    }
}

/// Closed-form spatial correlation of the diffuse field at lag `delta_x_m`.
///
/// Full sphere (`aperture = π`): `sin(kΔx)/(kΔx)`. Narrow cones
/// (`aperture < π/2`): `2·J1(v)/v`, `v = kΔx·sin θ_m`. In between, the
/// uniform-cap average is integrated numerically
/// (see [`cap_average_correlation`]).
pub fn spatial_correlation_theory(
    delta_x_m: f64,
    carrier_hz: f64,
    aperture_half_angle_rad: f64,
) -> f64 {
    if delta_x_m == 0.0 {
        return 1.0;
    }
    let k = 2.0 * PI * carrier_hz / SPEED_OF_LIGHT;
    let u = k * delta_x_m.abs();
    if aperture_half_angle_rad >= PI - 1e-12 {
        sinc_u(u)
    } else if aperture_half_angle_rad < PI / 2.0 {
        let v = u * aperture_half_angle_rad.sin();
        if v == 0.0 {
            1.0
        } else {
            2.0 * j1(v) / v
        }
    } else {
        cap_average_correlation(delta_x_m, carrier_hz, aperture_half_angle_rad)
    }
}

/// Exact correlation `E[exp(jkΔx·sinθ·cosφ)]` for directions uniform on a cap
/// of half-angle `θ_m`: `∫_0^θm J0(kΔx sinθ) sinθ dθ / (1 − cos θm)`,
/// evaluated with composite Simpson (2000 panels).
pub fn cap_average_correlation(
    delta_x_m: f64,
    carrier_hz: f64,
    aperture_half_angle_rad: f64,
) -> f64 {
    let k = 2.0 * PI * carrier_hz / SPEED_OF_LIGHT;
    let u = k * delta_x_m.abs();
    let m = 2000;
    let h = aperture_half_angle_rad / m as f64;
    let f = |t: f64| j0(u * t.sin()) * t.sin();
    let mut s = f(0.0) + f(aperture_half_angle_rad);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0 / (1.0 - aperture_half_angle_rad.cos())
}

/// Full width at which the squared theoretical correlation falls to one half.
pub fn correlation_half_power_width(carrier_hz: f64, aperture_half_angle_rad: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / carrier_hz;
    let below =
        |d: f64| spatial_correlation_theory(d, carrier_hz, aperture_half_angle_rad).powi(2) < 0.5;
    let step = lambda / 200.0;
    let mut hi = step;
    while !below(hi) {
        hi += step;
        if hi > 100.0 * lambda {
            return f64::NAN;
        }
    }
    let mut lo = hi - step;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo + hi
}

#[cfg(test)]
mod tests;
