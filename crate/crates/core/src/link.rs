//! Propagation of TR-precoded transmissions through a channel ensemble.

use rand::Rng;
use rayon::prelude::*;

use crate::channel::ChannelEnsemble;
use crate::precoding::TrFilterBank;
use crate::signal::{add_awgn, check_rates, fft, from_db};
use crate::{Error, Result, C64};

/// Received field `y_x[n]` over every grid position.
///
/// Rows have `2L−1` samples; with matched TR filters the focusing instant is
/// `peak_index = L−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub rows: Vec<Vec<C64>>,
    pub positions_m: Vec<f64>,
    pub peak_index: usize,
    pub sample_rate_hz: f64,
    /// Samples on each side of the peak treated as main lobe (`2·oversample`).
    pub guard_samples: usize,
}

impl SpaceTimeField {
    pub fn n_positions(&self) -> usize {
        self.rows.len()
    }

    pub fn row_len(&self) -> usize {
        self.rows.first().map(Vec::len).unwrap_or(0)
    }

    /// Time of sample `n` relative to the focusing instant.
    pub fn time_s(&self, n: usize) -> f64 {
        (n as f64 - self.peak_index as f64) / self.sample_rate_hz
    }
}

/// `per_user_rx[v][u]`: what user `u` receives from user `v`'s precoder.
#[derive(Debug, Clone, PartialEq)]
pub struct TrdmaResult {
    pub per_user_rx: Vec<Vec<Vec<C64>>>,
    pub symbol_period_samples: usize,
    pub peak_index: usize,
}

impl TrdmaResult {
    pub fn n_users(&self) -> usize {
        self.per_user_rx.len()
    }
}

fn check_dimensions(bank: &TrFilterBank, ensemble: &ChannelEnsemble) -> Result<()> {
    if bank.n_tx() != ensemble.n_tx() || bank.filter_len() != ensemble.n_taps() {
        return Err(Error::DimensionMismatch(format!(
            "bank is {}x{}, ensemble is {}x{}",
            bank.n_tx(),
            bank.filter_len(),
            ensemble.n_tx(),
            ensemble.n_taps()
        )));
    }
    check_rates(bank.sample_rate_hz(), ensemble.sample_rate_hz())
}

/// Per-antenna filter spectra on a grid long enough for linear convolution.
struct BankSpectra {
    n_fft: usize,
    out_len: usize,
    spectra: Vec<Vec<C64>>,
}

impl BankSpectra {
    fn new(bank: &TrFilterBank, n_taps: usize) -> Self {
        let out_len = bank.filter_len() + n_taps - 1;
        let n_fft = out_len.next_power_of_two();
        let spectra = bank
            .filters()
            .iter()
            .map(|w| fft::spectrum(w, n_fft))
            .collect();
        Self {
            n_fft,
            out_len,
            spectra,
        }
    }

    /// `y_x = Σ_a w_a * h_{a,x}`
    fn row(&self, ensemble: &ChannelEnsemble, rx: usize) -> Vec<C64> {
        let mut acc = vec![C64::new(0.0, 0.0); self.n_fft];
        for (a, w) in self.spectra.iter().enumerate() {
            let h = fft::spectrum(ensemble.cir(a, rx).taps(), self.n_fft);
            for ((o, x), y) in acc.iter_mut().zip(&h).zip(w) {
                *o += x * y;
            }
        }
        fft::inverse_in_place(&mut acc);
        acc.truncate(self.out_len);
        acc
    }
}

/// Noiseless received sequence at one grid position.
pub fn received_row(
    bank: &TrFilterBank,
    ensemble: &ChannelEnsemble,
    rx: usize,
) -> Result<Vec<C64>> {
    check_dimensions(bank, ensemble)?;
    if rx >= ensemble.n_rx() {
        return Err(Error::InvalidTarget(format!("rx index {rx} out of range")));
    }
    Ok(BankSpectra::new(bank, ensemble.n_taps()).row(ensemble, rx))
}

/// Received space-time field, optionally with receiver AWGN at `noise_snr_db`
/// relative to the spatial-peak power at the focusing instant.
pub fn focus_field<R: Rng + ?Sized>(
    bank: &TrFilterBank,
    ensemble: &ChannelEnsemble,
    noise_snr_db: Option<f64>,
    rng: &mut R,
) -> Result<SpaceTimeField> {
    check_dimensions(bank, ensemble)?;
    let spectra = BankSpectra::new(bank, ensemble.n_taps());
    let mut rows: Vec<Vec<C64>> = (0..ensemble.n_rx())
        .into_par_iter()
        .map(|rx| spectra.row(ensemble, rx))
        .collect();
    let peak_index = ensemble.n_taps() - 1;
    if let Some(snr) = noise_snr_db {
        let peak = rows
            .iter()
            .map(|r| r[peak_index].norm_sqr())
            .fold(0.0, f64::max);
        let variance = peak / from_db(snr);
        for row in rows.iter_mut() {
            add_awgn(row, variance, rng);
        }
    }
    Ok(SpaceTimeField {
        rows,
        positions_m: ensemble.grid().positions_m().to_vec(),
        peak_index,
        sample_rate_hz: ensemble.sample_rate_hz(),
        guard_samples: 2 * ensemble.params().oversample,
    })
}

/// Impulse-per-symbol multi-user transmission: user `v`'s bank is observed at
/// every user's target position.
pub fn trdma_link(
    banks: &[TrFilterBank],
    ensemble: &ChannelEnsemble,
    targets: &[usize],
    symbol_period_samples: usize,
) -> Result<TrdmaResult> {
    if banks.len() != targets.len() || banks.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} banks for {} targets",
            banks.len(),
            targets.len()
        )));
    }
    if symbol_period_samples == 0 {
        return Err(Error::InvalidParameter(
            "symbol period must be >= 1 sample".into(),
        ));
    }
    for (i, t) in targets.iter().enumerate() {
        if *t >= ensemble.n_rx() {
            return Err(Error::InvalidTarget(format!("rx index {t} out of range")));
        }
        if targets[..i].contains(t) {
            return Err(Error::InvalidTarget(format!(
                "rx index {t} is targeted twice"
            )));
        }
    }
    let mut per_user_rx = Vec::with_capacity(banks.len());
    for bank in banks {
        check_dimensions(bank, ensemble)?;
        let spectra = BankSpectra::new(bank, ensemble.n_taps());
        per_user_rx.push(targets.iter().map(|&u| spectra.row(ensemble, u)).collect());
    }
    Ok(TrdmaResult {
        per_user_rx,
        symbol_period_samples,
        peak_index: ensemble.n_taps() - 1,
    })
}

/// On-off keying through the TR link with a single-tap energy detector.
///
/// Each ON symbol launches the filter bank once; the receiver samples
/// `|y[L−1 + k·T]|²` and compares it against half the noiseless ON level.
/// Noise variance is the ON level divided by the SNR. Returns the bit error
/// rate.
#[allow(clippy::too_many_arguments)]
pub fn ook_link<R: Rng + ?Sized>(
    bank: &TrFilterBank,
    ensemble: &ChannelEnsemble,
    target: usize,
    snr_db: f64,
    n_symbols: usize,
    symbol_period_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    if n_symbols < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 symbols, got {n_symbols}"
        )));
    }
    if symbol_period_samples == 0 {
        return Err(Error::InvalidParameter(
            "symbol period must be >= 1 sample".into(),
        ));
    }
    let g = received_row(bank, ensemble, target)?;
    let peak = ensemble.n_taps() - 1;
    let on_level = g[peak].norm_sqr();
    let threshold = on_level / 2.0;
    let variance = on_level / from_db(snr_db);

    let bits: Vec<bool> = (0..n_symbols).map(|_| rng.random::<bool>()).collect();
    let mut noise = vec![C64::new(0.0, 0.0); n_symbols];
    add_awgn(&mut noise, variance, rng);

    let t = symbol_period_samples as isize;
    let span = (g.len() as isize - 1 - peak as isize) / t;
    let mut errors = 0usize;
    for k in 0..n_symbols as isize {
        let mut y = noise[k as usize];
        for j in (k - span).max(0)..=(k + span).min(n_symbols as isize - 1) {
            if bits[j as usize] {
                let idx = peak as isize + (k - j) * t;
                if idx >= 0 && (idx as usize) < g.len() {
                    y += g[idx as usize];
                }
            }
        }
        if (y.norm_sqr() > threshold) != bits[k as usize] {
            errors += 1;
        }
    }
    Ok(errors as f64 / n_symbols as f64)
}
