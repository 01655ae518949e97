//! Sampled complex-baseband signals and the operations every other module
//! builds on.

pub mod fft;
mod resample;
mod sounding;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result, C64};

pub use resample::resample_rational;
pub use sounding::{
    deconvolution_grid_len, inband_nmse_db, noise_epsilon, noiseless_epsilon, sound_channel,
    wiener_deconvolve,
};

/// Below this many multiply-adds the direct convolution sum is used.
const DIRECT_CONVOLUTION_LIMIT: usize = 4096;

/// A uniformly sampled complex-baseband signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<C64>,
    sample_rate_hz: f64,
    carrier_hz: f64,
}

impl Waveform {
    pub fn new(samples: Vec<C64>, sample_rate_hz: f64, carrier_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("waveform has no samples".into()));
        }
        if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if !(carrier_hz >= 0.0 && carrier_hz.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "carrier must be nonnegative, got {carrier_hz}"
            )));
        }
        if !energy(&samples).is_finite() {
            return Err(Error::InvalidParameter(
                "waveform energy is not finite".into(),
            ));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            carrier_hz,
        })
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> f64 {
        energy(&self.samples)
    }

    pub fn with_carrier(mut self, carrier_hz: f64) -> Self {
        self.carrier_hz = carrier_hz;
        self
    }
}

/// Channel impulse response for one transmit antenna / receive position pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Cir {
    taps: Vec<C64>,
    sample_rate_hz: f64,
    carrier_hz: f64,
}

impl Cir {
    pub fn new(taps: Vec<C64>, sample_rate_hz: f64, carrier_hz: f64) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidParameter("CIR has no taps".into()));
        }
        if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if !(carrier_hz > 0.0 && carrier_hz.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "CIR carrier must be positive, got {carrier_hz}"
            )));
        }
        if !energy(&taps).is_finite() {
            return Err(Error::InvalidParameter("CIR energy is not finite".into()));
        }
        Ok(Self {
            taps,
            sample_rate_hz,
            carrier_hz,
        })
    }

    pub fn taps(&self) -> &[C64] {
        &self.taps
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// ‖h‖²
    pub fn energy(&self) -> f64 {
        energy(&self.taps)
    }

    pub fn to_waveform(&self) -> Waveform {
        Waveform {
            samples: self.taps.clone(),
            sample_rate_hz: self.sample_rate_hz,
            carrier_hz: self.carrier_hz,
        }
    }
}

pub fn energy(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum()
}

/// Linear FM sweep `s[n] = exp(jπκ(t_n − T/2)²)` with sweep rate `κ` in Hz/s.
///
/// `κ = 0` yields a constant unit tone.
pub fn linear_fm(
    sweep_rate_hz_per_s: f64,
    duration_s: f64,
    sample_rate_hz: f64,
) -> Result<Waveform> {
    if !(duration_s > 0.0) || !(sample_rate_hz > 0.0) {
        return Err(Error::InvalidParameter(
            "chirp duration and sample rate must be positive".into(),
        ));
    }
    let n = (duration_s * sample_rate_hz).round() as usize;
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "chirp must span at least 2 samples, got {n}"
        )));
    }
    let half = duration_s / 2.0;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / sample_rate_hz - half;
            C64::from_polar(1.0, PI * sweep_rate_hz_per_s * t * t)
        })
        .collect();
    Waveform::new(samples, sample_rate_hz, 0.0)
}

/// Rectangular-envelope linear chirp sweeping `[-B/2, +B/2]` over `duration_s`.
pub fn gen_chirp(bandwidth_hz: f64, duration_s: f64, sample_rate_hz: f64) -> Result<Waveform> {
    if !(bandwidth_hz > 0.0) || !(duration_s > 0.0) || !(sample_rate_hz > 0.0) {
        return Err(Error::InvalidParameter(
            "chirp bandwidth, duration and sample rate must be positive".into(),
        ));
    }
    if sample_rate_hz < bandwidth_hz {
        return Err(Error::Aliasing {
            sample_rate_hz,
            bandwidth_hz,
        });
    }
    linear_fm(bandwidth_hz / duration_s, duration_s, sample_rate_hz)
}

/// Full linear convolution of two sample sequences.
pub fn convolve_samples(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 16 || a.len() * b.len() <= DIRECT_CONVOLUTION_LIMIT {
        let mut out = vec![C64::new(0.0, 0.0); out_len];
        for (i, &x) in a.iter().enumerate() {
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        return out;
    }
    let n = out_len.next_power_of_two();
    let mut fa = fft::spectrum(a, n);
    let fb = fft::spectrum(b, n);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    fft::inverse_in_place(&mut fa);
    fa.truncate(out_len);
    fa
}

pub fn convolve(a: &Waveform, b: &Waveform) -> Result<Waveform> {
    check_rates(a.sample_rate_hz, b.sample_rate_hz)?;
    Waveform::new(
        convolve_samples(&a.samples, &b.samples),
        a.sample_rate_hz,
        a.carrier_hz,
    )
}

pub(crate) fn check_rates(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > 1e-9 * a.abs().max(b.abs()) {
        return Err(Error::RateMismatch(a, b));
    }
    Ok(())
}

/// `out[n] = conj(x[L−1−n])`.
pub fn reverse_conjugate(x: &[C64]) -> Vec<C64> {
    x.iter().rev().map(|v| v.conj()).collect()
}

pub fn time_reverse_conjugate(w: &Waveform) -> Waveform {
    Waveform {
        samples: reverse_conjugate(&w.samples),
        sample_rate_hz: w.sample_rate_hz,
        carrier_hz: w.carrier_hz,
    }
}

/// Adds circularly-symmetric complex Gaussian noise of total variance
/// `variance` per sample.
pub fn add_awgn<R: Rng + ?Sized>(samples: &mut [C64], variance: f64, rng: &mut R) {
    if variance <= 0.0 {
        return;
    }
    let sigma = (variance / 2.0).sqrt();
    for s in samples.iter_mut() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *s += C64::new(re * sigma, im * sigma);
    }
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn from_db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}
