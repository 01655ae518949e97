//! Thin wrappers over `rustfft` with a per-thread planner cache.

use std::cell::RefCell;

use rustfft::FftPlanner;

use crate::C64;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward DFT of `x`, zero-padded (or truncated) to `n` points.
pub fn spectrum(x: &[C64], n: usize) -> Vec<C64> {
    let mut buf = vec![C64::new(0.0, 0.0); n];
    let m = x.len().min(n);
    buf[..m].copy_from_slice(&x[..m]);
    forward_in_place(&mut buf);
    buf
}

pub fn forward_in_place(buf: &mut [C64]) {
    if buf.is_empty() {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

/// Inverse DFT scaled by `1/n`, so `inverse(spectrum(x, n)) == x` (zero-padded).
pub fn inverse_in_place(buf: &mut [C64]) {
    if buf.is_empty() {
        return;
    }
    let n = buf.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(buf);
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Signed frequency (Hz) of bin `k` on an `n`-point grid at `sample_rate_hz`.
pub fn bin_frequency(k: usize, n: usize, sample_rate_hz: f64) -> f64 {
    let k = if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    };
    k * sample_rate_hz / n as f64
}
