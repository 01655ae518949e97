//! Figures of merit extracted from simulated fields.
//!
//! Every resolution figure is a half-power (−3 dB) width with linear
//! interpolation between samples.

use serde::{Deserialize, Serialize};

use crate::link::{SpaceTimeField, TrdmaResult};
use crate::signal::db;
use crate::{Error, Result, C64};

/// Per-trial summary of one focusing experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocusingReport {
    pub trial: usize,
    pub fc_hz: f64,
    pub b_hz: f64,
    pub nt: usize,
    pub seed: u64,
    #[serde(with = "undefined_as_null")]
    pub peak_power_db: f64,
    /// Undefined widths and gains (edge peaks, empty background) are NaN,
    /// written as `null`.
    #[serde(with = "undefined_as_null")]
    pub temporal_fwhm_s: f64,
    #[serde(with = "undefined_as_null")]
    pub spatial_fwhm_m: f64,
    #[serde(with = "undefined_as_null")]
    pub focusing_gain_db: f64,
    /// Per-user SIR for multi-user runs; `null` in JSON encodes `+∞`.
    #[serde(with = "infinite_as_null_vec")]
    pub sir_db: Option<Vec<f64>>,
    #[serde(with = "infinite_as_null")]
    pub isi_ratio_db: f64,
}

mod undefined_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

mod infinite_as_null_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|xs| {
                xs.iter()
                    .map(|x| x.is_finite().then_some(*x))
                    .collect::<Vec<_>>()
            })
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
        let raw = Option::<Vec<Option<f64>>>::deserialize(d)?;
        Ok(raw.map(|xs| xs.into_iter().map(|x| x.unwrap_or(f64::INFINITY)).collect()))
    }
}

/// Index of the largest value; ties go to the lowest index.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Fractional indices of the half-power crossings bracketing `peak`.
fn half_power_crossings(power: &[f64], peak: usize) -> Result<(f64, f64)> {
    let half = power[peak] / 2.0;
    let left = (0..peak)
        .rev()
        .find(|&j| power[j] < half)
        .map(|j| j as f64 + (half - power[j]) / (power[j + 1] - power[j]))
        .ok_or(Error::EdgePeak)?;
    let right = (peak + 1..power.len())
        .find(|&j| power[j] < half)
        .map(|j| (j - 1) as f64 + (power[j - 1] - half) / (power[j - 1] - power[j]))
        .ok_or(Error::EdgePeak)?;
    Ok((left, right))
}

/// Half-power width (seconds) of `|y[n]|²` around its global maximum.
pub fn temporal_fwhm(y: &[C64], sample_rate_hz: f64) -> Result<f64> {
    let power: Vec<f64> = y.iter().map(|v| v.norm_sqr()).collect();
    if power.is_empty() {
        return Err(Error::EdgePeak);
    }
    let (l, r) = half_power_crossings(&power, argmax(&power))?;
    Ok((r - l) / sample_rate_hz)
}

/// Power across the grid at one time index, normalized to its spatial peak.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialProfile {
    pub positions_m: Vec<f64>,
    pub power_db: Vec<f64>,
    pub fwhm_m: f64,
    pub peak_index: usize,
}

fn interpolate_position(positions: &[f64], x: f64) -> f64 {
    let i = (x.floor() as usize).min(positions.len() - 1);
    let frac = x - i as f64;
    if frac == 0.0 || i + 1 >= positions.len() {
        positions[i]
    } else {
        positions[i] + frac * (positions[i + 1] - positions[i])
    }
}

pub fn spatial_profile(field: &SpaceTimeField, peak_time_index: usize) -> Result<SpatialProfile> {
    if peak_time_index >= field.row_len() {
        return Err(Error::InvalidParameter(format!(
            "time index {peak_time_index} beyond record length {}",
            field.row_len()
        )));
    }
    let power: Vec<f64> = field
        .rows
        .iter()
        .map(|r| r[peak_time_index].norm_sqr())
        .collect();
    spatial_profile_from_power(&field.positions_m, &power)
}

/// Spatial profile of an arbitrary per-position power sequence.
pub fn spatial_profile_from_power(positions_m: &[f64], power: &[f64]) -> Result<SpatialProfile> {
    if power.is_empty() || power.len() != positions_m.len() {
        return Err(Error::DimensionMismatch(
            "positions and powers differ in length".into(),
        ));
    }
    let peak = argmax(power);
    let (l, r) = half_power_crossings(power, peak)?;
    let fwhm_m = interpolate_position(positions_m, r) - interpolate_position(positions_m, l);
    let max = power[peak];
    Ok(SpatialProfile {
        positions_m: positions_m.to_vec(),
        power_db: power.iter().map(|p| db(p / max)).collect(),
        fwhm_m,
        peak_index: peak,
    })
}

/// Peak power at the target over the mean background: samples at other
/// positions that are more than `guard_samples` away from the focusing
/// instant.
pub fn focusing_gain(field: &SpaceTimeField, target: usize) -> Result<f64> {
    if target >= field.n_positions() {
        return Err(Error::InvalidTarget(format!(
            "rx index {target} out of range"
        )));
    }
    let peak = field.rows[target][field.peak_index].norm_sqr();
    let (mut sum, mut count) = (0.0, 0usize);
    for (x, row) in field.rows.iter().enumerate() {
        if x == target {
            continue;
        }
        for (n, v) in row.iter().enumerate() {
            if n.abs_diff(field.peak_index) > field.guard_samples {
                sum += v.norm_sqr();
                count += 1;
            }
        }
    }
    if count == 0 || sum == 0.0 {
        return Err(Error::DegenerateBackground);
    }
    Ok(db(peak / (sum / count as f64)))
}

/// Per-user signal-to-interference ratio (dB) at the focusing instant.
/// Users with no interference get `+∞`.
pub fn sir(trdma: &TrdmaResult) -> Result<Vec<f64>> {
    let u_count = trdma.n_users();
    if u_count < 2 {
        return Err(Error::InvalidParameter(format!(
            "SIR needs >= 2 users, got {u_count}"
        )));
    }
    let p = trdma.peak_index;
    Ok((0..u_count)
        .map(|u| {
            let signal = trdma.per_user_rx[u][u][p].norm_sqr();
            let interference: f64 = (0..u_count)
                .filter(|&v| v != u)
                .map(|v| trdma.per_user_rx[v][u][p].norm_sqr())
                .sum();
            if interference == 0.0 {
                f64::INFINITY
            } else {
                db(signal / interference)
            }
        })
        .collect())
}

/// Peak power over the power sampled at the other symbol instants
/// `peak ± m·T`; `+∞` when those are all zero.
pub fn isi_ratio_db(row: &[C64], peak_index: usize, symbol_period_samples: usize) -> f64 {
    let t = symbol_period_samples.max(1);
    let peak = row[peak_index].norm_sqr();
    let before = (1..=peak_index / t).map(|m| row[peak_index - m * t].norm_sqr());
    let after = (1..)
        .map(|m| peak_index + m * t)
        .take_while(|&i| i < row.len())
        .map(|i| row[i].norm_sqr());
    let isi: f64 = before.chain(after).sum();
    if isi == 0.0 {
        f64::INFINITY
    } else {
        db(peak / isi)
    }
}

/// ISI ratio of each user's own link in a TRDMA run.
pub fn trdma_isi_db(trdma: &TrdmaResult) -> Vec<f64> {
    (0..trdma.n_users())
        .map(|u| {
            isi_ratio_db(
                &trdma.per_user_rx[u][u],
                trdma.peak_index,
                trdma.symbol_period_samples,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    fn sinc(x: f64) -> f64 {
        if x == 0.0 {
            1.0
        } else {
            (PI * x).sin() / (PI * x)
        }
    }

    #[test]
    fn sinc_squared_width() {
        let b = 100e6;
        let fs = 4.0 * b;
        let y: Vec<C64> = (-200..=200)
            .map(|n| C64::new(sinc(b * n as f64 / fs), 0.0))
            .collect();
        let w = temporal_fwhm(&y, fs).unwrap();
        let want = 0.886 / b;
        assert!((w - want).abs() / want < 0.02, "{w} vs {want}");
    }

    #[test]
    fn plateau_width_and_tie_break() {
        let y = real(&[0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        assert!((temporal_fwhm(&y, 1.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn edge_peak_rejected() {
        assert_eq!(
            temporal_fwhm(&real(&[1.0, 0.5, 0.1]), 1.0),
            Err(Error::EdgePeak)
        );
        assert_eq!(
            temporal_fwhm(&real(&[0.1, 0.5, 1.0]), 1.0),
            Err(Error::EdgePeak)
        );
    }

    fn field_from(
        rows: Vec<Vec<C64>>,
        positions: Vec<f64>,
        peak: usize,
        guard: usize,
    ) -> SpaceTimeField {
        SpaceTimeField {
            rows,
            positions_m: positions,
            peak_index: peak,
            sample_rate_hz: 1.0,
            guard_samples: guard,
        }
    }

    #[test]
    fn analytic_diffuse_profile_width() {
        let lambda = 0.12;
        let k = 2.0 * PI / lambda;
        let positions: Vec<f64> = (-40..=40).map(|i| i as f64 * lambda / 40.0).collect();
        let rows = positions
            .iter()
            .map(|&x| {
                let u = k * x;
                vec![C64::new(if u == 0.0 { 1.0 } else { u.sin() / u }, 0.0)]
            })
            .collect();
        let f = field_from(rows, positions, 0, 0);
        let p = spatial_profile(&f, 0).unwrap();
        assert!(
            (p.fwhm_m / lambda - 0.443).abs() / 0.443 < 0.03,
            "{}",
            p.fwhm_m / lambda
        );
        assert_eq!(p.peak_index, 40);
        assert_eq!(p.power_db[40], 0.0);
    }

    #[test]
    fn single_position_is_edge_peak() {
        let f = field_from(vec![vec![C64::new(1.0, 0.0)]], vec![0.0], 0, 0);
        assert_eq!(spatial_profile(&f, 0), Err(Error::EdgePeak));
    }

    #[test]
    fn profiles_ignore_global_scaling() {
        let positions: Vec<f64> = (0..9).map(|i| i as f64 * 0.01).collect();
        let vals = [0.1, 0.3, 0.5, 0.9, 1.0, 0.8, 0.4, 0.2, 0.1];
        let rows: Vec<Vec<C64>> = vals.iter().map(|&v| real(&[0.2 * v, v, 0.3 * v])).collect();
        let a = field_from(rows.clone(), positions.clone(), 1, 0);
        let s = C64::from_polar(7.5, 1.1);
        let b = field_from(
            rows.iter()
                .map(|r| r.iter().map(|v| v * s).collect())
                .collect(),
            positions,
            1,
            0,
        );
        let (pa, pb) = (
            spatial_profile(&a, 1).unwrap(),
            spatial_profile(&b, 1).unwrap(),
        );
        assert!((pa.fwhm_m - pb.fwhm_m).abs() < 1e-12);
        let ya = &a.rows[4];
        let yb = &b.rows[4];
        assert!((temporal_fwhm(ya, 1.0).unwrap() - temporal_fwhm(yb, 1.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn flat_field_has_no_gain() {
        let rows = vec![vec![C64::new(1.0, 1.0); 20]; 5];
        let f = field_from(rows, (0..5).map(|i| i as f64).collect(), 10, 2);
        assert!(focusing_gain(&f, 2).unwrap().abs() < 1e-12);
        let zero = field_from(vec![vec![C64::new(0.0, 0.0); 20]; 2], vec![0.0, 1.0], 10, 2);
        assert_eq!(focusing_gain(&zero, 0), Err(Error::DegenerateBackground));
    }

    fn trdma(rows: [[Vec<C64>; 2]; 2], peak: usize) -> TrdmaResult {
        TrdmaResult {
            per_user_rx: rows.into_iter().map(|r| r.into_iter().collect()).collect(),
            symbol_period_samples: 1,
            peak_index: peak,
        }
    }

    #[test]
    fn sir_orthogonal_and_identical_channels() {
        // δ channels at different taps: cross terms vanish at the peak
        let own = real(&[0.0, 1.0, 0.0]);
        let cross = real(&[1.0, 0.0, 0.0]);
        let t = trdma([[own.clone(), cross.clone()], [cross, own.clone()]], 1);
        assert!(sir(&t).unwrap().iter().all(|s| *s == f64::INFINITY));

        let t = trdma([[own.clone(), own.clone()], [own.clone(), own]], 1);
        assert!(sir(&t).unwrap().iter().all(|s| s.abs() < 1e-9));

        let single = TrdmaResult {
            per_user_rx: vec![vec![real(&[1.0])]],
            symbol_period_samples: 1,
            peak_index: 0,
        };
        assert!(matches!(sir(&single), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn isi_ratio_samples_symbol_instants() {
        let row = real(&[0.5, 9.0, 0.5, 0.0, 1.0, 7.0, 0.5]);
        // peak 4, period 2: instants 0, 2, 6 -> 0.25 + 0.25 + 0.25
        let want = 10.0 * (1.0f64 / 0.75).log10();
        assert!((isi_ratio_db(&row, 4, 2) - want).abs() < 1e-12);
        assert_eq!(isi_ratio_db(&real(&[0.0, 1.0, 0.0]), 1, 2), f64::INFINITY);
    }

    #[test]
    fn report_json_encodes_infinity_as_null() {
        let r = FocusingReport {
            trial: 0,
            fc_hz: 36e9,
            b_hz: 2e9,
            nt: 1,
            seed: 1,
            peak_power_db: 0.0,
            temporal_fwhm_s: 1e-9,
            spatial_fwhm_m: 1e-3,
            focusing_gain_db: 20.0,
            sir_db: Some(vec![12.5, f64::INFINITY]),
            isi_ratio_db: f64::INFINITY,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"sir_db\":[12.5,null]"));
        assert!(s.contains("\"isi_ratio_db\":null"));
        let back: FocusingReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
