//! Time-reversal filter banks and per-bin MRT weights.
//!
//! Both precoders share one joint normalization across antennas: the bank is
//! scaled by `c = sqrt(Σ_a ‖h_a‖² / E_tx)` so the total transmit energy is
//! `E_tx`. MRT weights are normalized to unit total energy.

use std::f64::consts::PI;

use crate::signal::{check_rates, energy, fft, reverse_conjugate, Cir};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct TrFilterBank {
    filters: Vec<Vec<C64>>,
    total_energy: f64,
    sample_rate_hz: f64,
}

impl TrFilterBank {
    /// Wraps arbitrary per-antenna filters, jointly rescaled to `total_energy`.
    pub fn from_filters(
        filters: Vec<Vec<C64>>,
        total_energy: f64,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        if !(total_energy > 0.0 && total_energy.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "total energy must be positive, got {total_energy}"
            )));
        }
        let len = filters.first().map(Vec::len).unwrap_or(0);
        if len == 0 || filters.iter().any(|f| f.len() != len) {
            return Err(Error::DimensionMismatch(
                "filters must be non-empty and of equal length".into(),
            ));
        }
        let e: f64 = filters.iter().map(|f| energy(f)).sum();
        if e == 0.0 {
            return Err(Error::DegenerateChannel);
        }
        let scale = (total_energy / e).sqrt();
        let filters = filters
            .into_iter()
            .map(|f| f.into_iter().map(|v| v * scale).collect())
            .collect();
        Ok(Self {
            filters,
            total_energy,
            sample_rate_hz,
        })
    }

    pub fn filters(&self) -> &[Vec<C64>] {
        &self.filters
    }

    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn n_tx(&self) -> usize {
        self.filters.len()
    }

    pub fn filter_len(&self) -> usize {
        self.filters[0].len()
    }

    /// `Σ_a Σ_n |w_a[n]|²`
    pub fn energy(&self) -> f64 {
        self.filters.iter().map(|f| energy(f)).sum()
    }
}

fn check_cirs(cirs: &[Cir]) -> Result<(usize, f64)> {
    let first = cirs
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no CIRs given".into()))?;
    for c in cirs {
        if c.len() != first.len() {
            return Err(Error::DimensionMismatch("CIR tap counts differ".into()));
        }
        check_rates(c.sample_rate_hz(), first.sample_rate_hz())?;
    }
    let total: f64 = cirs.iter().map(Cir::energy).sum();
    if total == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    Ok((first.len(), total))
}

/// `w_a[n] = conj(h_a[L−1−n]) / c`.
pub fn tr_filters(cirs: &[Cir], total_energy: f64) -> Result<TrFilterBank> {
    check_cirs(cirs)?;
    let filters = cirs.iter().map(|c| reverse_conjugate(c.taps())).collect();
    TrFilterBank::from_filters(filters, total_energy, cirs[0].sample_rate_hz())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MrtWeights {
    /// `[antenna][bin]`
    weights: Vec<Vec<C64>>,
    n_bins: usize,
}

impl MrtWeights {
    pub fn weights(&self) -> &[Vec<C64>] {
        &self.weights
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }
}

/// `W_a[k] = conj(H_a[k]) / c` on an `n_bins`-point DFT, with
/// `c = sqrt(Σ_a ‖h_a‖²)` (unit total energy).
pub fn mrt_weights(cirs: &[Cir], n_bins: usize) -> Result<MrtWeights> {
    let (len, total) = check_cirs(cirs)?;
    if n_bins < len {
        return Err(Error::InvalidParameter(format!(
            "n_bins ({n_bins}) must be at least the CIR length ({len})"
        )));
    }
    let scale = 1.0 / total.sqrt();
    let weights = cirs
        .iter()
        .map(|c| {
            fft::spectrum(c.taps(), n_bins)
                .into_iter()
                .map(|h| h.conj() * scale)
                .collect()
        })
        .collect();
    Ok(MrtWeights { weights, n_bins })
}

/// Largest per-bin deviation between TR and MRT precoding, relative to
/// `max|W_MRT|`.
///
/// The TR spectra are rescaled to the MRT energy and the pure delay of `L−1`
/// samples is removed (`W_TR[k]·exp(+j2πk(L−1)/N)`) before comparing; the
/// returned complex deviation bounds the magnitude deviation
/// `| |W_TR[k]| − |W_MRT[k]| |`. `N = 2L−1`.
pub fn equivalence_residual(bank: &TrFilterBank, cirs: &[Cir]) -> Result<f64> {
    let (len, _) = check_cirs(cirs)?;
    if bank.n_tx() != cirs.len() || bank.filter_len() != len {
        return Err(Error::DimensionMismatch(format!(
            "bank is {}x{}, CIRs are {}x{}",
            bank.n_tx(),
            bank.filter_len(),
            cirs.len(),
            len
        )));
    }
    let n = 2 * len - 1;
    let mrt = mrt_weights(cirs, n)?;
    let tr: Vec<Vec<C64>> = bank.filters().iter().map(|w| fft::spectrum(w, n)).collect();

    let e_mrt: f64 = mrt.weights.iter().flatten().map(|v| v.norm_sqr()).sum();
    let e_tr: f64 = tr.iter().flatten().map(|v| v.norm_sqr()).sum();
    let alpha = (e_mrt / e_tr).sqrt();
    let max_mrt = mrt
        .weights
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0, f64::max);

    let mut worst: f64 = 0.0;
    for (wt, wm) in tr.iter().zip(&mrt.weights) {
        for (k, (t, m)) in wt.iter().zip(wm).enumerate() {
            let undelay = C64::from_polar(1.0, 2.0 * PI * ((k * (len - 1)) % n) as f64 / n as f64);
            let aligned = t * alpha * undelay;
            worst = worst
                .max((aligned - m).norm())
                .max((aligned.norm() - m.norm()).abs());
        }
    }
    Ok(worst / max_mrt)
}
