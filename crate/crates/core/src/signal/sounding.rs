//! Chirp sounding and regularized (Wiener) deconvolution CIR estimation.

use rand::Rng;

use super::{add_awgn, check_rates, convolve_samples, energy, fft, Cir, Waveform};
use crate::{Error, Result, C64};

/// Relative floor below which a probe bin counts as empty when `ε = 0`.
const ILL_CONDITIONED_FLOOR: f64 = 1e-12;

/// Transform size used to deconvolve a record of `received_len` samples.
pub fn deconvolution_grid_len(received_len: usize) -> usize {
    received_len.next_power_of_two()
}

/// Default regularizer for noiseless sounding: `1e-6·max|S(f)|²`.
pub fn noiseless_epsilon(probe: &[C64], n_fft: usize) -> f64 {
    let s = fft::spectrum(probe, n_fft);
    1e-6 * s.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
}

/// Regularizer matched to white noise of per-sample variance `noise_variance`:
/// the expected noise power in one bin of the unnormalized `n_fft`-point DFT.
pub fn noise_epsilon(noise_variance: f64, n_fft: usize) -> f64 {
    noise_variance * n_fft as f64
}

/// Estimates an `n_taps` CIR from a received record and the transmitted probe.
///
/// `Ĥ(f) = R(f)·conj(S(f)) / (|S(f)|² + ε)` on a power-of-two grid of at least
/// `len(received)` points; `ε` is expressed in the units of `|S(f)|²` for the
/// unnormalized DFT.
pub fn wiener_deconvolve(
    received: &Waveform,
    probe: &Waveform,
    epsilon: f64,
    n_taps: usize,
) -> Result<Cir> {
    check_rates(received.sample_rate_hz(), probe.sample_rate_hz())?;
    if received.len() < probe.len() {
        return Err(Error::InvalidParameter(format!(
            "received record ({}) shorter than probe ({})",
            received.len(),
            probe.len()
        )));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be >= 0, got {epsilon}"
        )));
    }
    if n_taps == 0 {
        return Err(Error::InvalidParameter(
            "CIR length must be positive".into(),
        ));
    }
    if energy(probe.samples()) == 0.0 {
        return Err(Error::DegenerateProbe);
    }
    let n = deconvolution_grid_len(received.len());
    let s = fft::spectrum(probe.samples(), n);
    let max_s = s.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    if epsilon == 0.0 {
        let floor = (ILL_CONDITIONED_FLOOR * max_s.sqrt()).powi(2);
        if s.iter().any(|v| v.norm_sqr() < floor) {
            return Err(Error::IllConditioned);
        }
    }
    let mut h = fft::spectrum(received.samples(), n);
    for (r, sk) in h.iter_mut().zip(&s) {
        *r = *r * sk.conj() / (sk.norm_sqr() + epsilon);
    }
    fft::inverse_in_place(&mut h);
    h.truncate(n_taps.min(n));
    h.resize(n_taps, C64::new(0.0, 0.0));
    Cir::new(h, received.sample_rate_hz(), received.carrier_hz())
}

/// Sounds `cir` with `probe`, adds receiver noise at `snr_db` (relative to the
/// mean received signal power) and returns the deconvolved estimate with the
/// same tap count. `None` means noiseless sounding.
pub fn sound_channel<R: Rng + ?Sized>(
    cir: &Cir,
    probe: &Waveform,
    snr_db: Option<f64>,
    rng: &mut R,
) -> Result<Cir> {
    check_rates(cir.sample_rate_hz(), probe.sample_rate_hz())?;
    let mut rx = convolve_samples(probe.samples(), cir.taps());
    let n = deconvolution_grid_len(rx.len());
    let epsilon = match snr_db {
        Some(snr) => {
            let power = energy(&rx) / rx.len() as f64;
            let variance = power / super::from_db(snr);
            add_awgn(&mut rx, variance, rng);
            noise_epsilon(variance, n)
        }
        None => noiseless_epsilon(probe.samples(), n),
    };
    let received = Waveform::new(rx, cir.sample_rate_hz(), cir.carrier_hz())?;
    wiener_deconvolve(&received, probe, epsilon, cir.len())
}

/// NMSE (dB) between two tap sequences restricted to the band `|f| ≤ B/2`.
pub fn inband_nmse_db(
    estimate: &[C64],
    truth: &[C64],
    sample_rate_hz: f64,
    bandwidth_hz: f64,
) -> f64 {
    let n = estimate.len().max(truth.len()).next_power_of_two();
    let e = fft::spectrum(estimate, n);
    let t = fft::spectrum(truth, n);
    let (mut err, mut sig) = (0.0, 0.0);
    for k in 0..n {
        if fft::bin_frequency(k, n, sample_rate_hz).abs() <= bandwidth_hz / 2.0 {
            err += (e[k] - t[k]).norm_sqr();
            sig += t[k].norm_sqr();
        }
    }
    10.0 * (err / sig).log10()
}
