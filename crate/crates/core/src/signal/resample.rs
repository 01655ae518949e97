//! Polyphase rational resampling with a Kaiser-windowed sinc prototype.

use std::f64::consts::PI;

use super::Waveform;
use crate::{Error, Result, C64};

/// Stopband attenuation of the prototype low-pass (dB).
const STOPBAND_DB: f64 = 70.0;
/// Passband edge as a fraction of the narrower of the two Nyquist bands.
const PASSBAND_FRACTION: f64 = 0.8;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Zeroth-order modified Bessel function of the first kind (power series).
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Prototype low-pass taps `h[-K..=K]` at the upsampled rate, with DC gain `up`.
fn design_prototype(up: usize, down: usize) -> Vec<f64> {
    // cycles per upsampled sample
    let stop = 0.5 / up.max(down) as f64;
    let pass = PASSBAND_FRACTION * stop;
    let cutoff = 0.5 * (pass + stop);
    let transition = stop - pass;
    let beta = 0.1102 * (STOPBAND_DB - 8.7);
    let order = ((STOPBAND_DB - 7.95) / (14.36 * transition)).ceil() as usize;
    let half = order.div_ceil(2).max(1);
    let i0_beta = bessel_i0(beta);
    (0..=2 * half)
        .map(|i| {
            let k = i as f64 - half as f64;
            let x = 2.0 * cutoff * k;
            let sinc = if k == 0.0 {
                1.0
            } else {
                (PI * x).sin() / (PI * x)
            };
            let r = k / half as f64;
            let window = bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / i0_beta;
            2.0 * cutoff * sinc * window * up as f64
        })
        .collect()
}

/// Changes the sample rate by `up/down`.
///
/// The output is time-aligned with the input (zero-delay prototype) and has
/// `ceil(len·up/down)` samples.
pub fn resample_rational(w: &Waveform, up: usize, down: usize) -> Result<Waveform> {
    if up == 0 || down == 0 {
        return Err(Error::InvalidParameter(format!(
            "resampling factors must be positive, got {up}/{down}"
        )));
    }
    let g = gcd(up, down);
    let (up, down) = (up / g, down / g);
    if up == 1 && down == 1 {
        return Ok(w.clone());
    }
    let h = design_prototype(up, down);
    let half = (h.len() / 2) as isize;
    let x = w.samples();
    let n_in = x.len() as isize;
    let n_out = (x.len() * up).div_ceil(down);
    let (up_i, down_i) = (up as isize, down as isize);

    let out: Vec<C64> = (0..n_out as isize)
        .map(|m| {
            let t0 = m * down_i;
            // inputs n with |t0 - n·up| <= half
            let lo = (t0 - half).div_euclid(up_i) + ((t0 - half).rem_euclid(up_i) != 0) as isize;
            let hi = (t0 + half).div_euclid(up_i);
            let mut acc = C64::new(0.0, 0.0);
            for n in lo.max(0)..=hi.min(n_in - 1) {
                let tap = h[(t0 - n * up_i + half) as usize];
                acc += x[n as usize] * tap;
            }
            acc
        })
        .collect();
    Waveform::new(
        out,
        w.sample_rate_hz() * up as f64 / down as f64,
        w.carrier_hz(),
    )
}
