//! Ensemble files: one JSON header line followed by the tap table.
//!
//! Text encoding: one line per tap, `tx rx tap re im`, in `(tx, rx, tap)`
//! order. Floats are written in Rust's shortest round-trip form, so loading
//! a text file reproduces the taps bit for bit.
//!
//! Binary encoding: the same header line, then `re, im` pairs as
//! little-endian `f64` in the same order.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{CavityParams, ChannelEnsemble, RxGrid};
use crate::signal::Cir;
use crate::{Error, Result, C64};

const FORMAT_TAG: &str = "trfocus-ensemble";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleEncoding {
    Text,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleHeader {
    pub format: String,
    pub version: u32,
    pub encoding: EnsembleEncoding,
    pub params: CavityParams,
    pub grid: RxGrid,
    pub n_tx: usize,
    pub n_rx: usize,
    pub n_taps: usize,
    pub seed: Option<u64>,
}

pub fn write_ensemble<W: Write>(
    ensemble: &ChannelEnsemble,
    seed: Option<u64>,
    encoding: EnsembleEncoding,
    mut out: W,
) -> Result<()> {
    let header = EnsembleHeader {
        format: FORMAT_TAG.into(),
        version: FORMAT_VERSION,
        encoding,
        params: *ensemble.params(),
        grid: ensemble.grid().clone(),
        n_tx: ensemble.n_tx(),
        n_rx: ensemble.n_rx(),
        n_taps: ensemble.n_taps(),
        seed,
    };
    let json = serde_json::to_string(&header).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(out, "{json}")?;
    for (tx, row) in ensemble.cirs().iter().enumerate() {
        for (rx, cir) in row.iter().enumerate() {
            for (n, t) in cir.taps().iter().enumerate() {
                match encoding {
                    EnsembleEncoding::Text => writeln!(out, "{tx} {rx} {n} {} {}", t.re, t.im)?,
                    EnsembleEncoding::Binary => {
                        out.write_all(&t.re.to_le_bytes())?;
                        out.write_all(&t.im.to_le_bytes())?;
                    }
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_ensemble<R: BufRead>(mut input: R) -> Result<(ChannelEnsemble, EnsembleHeader)> {
    let mut line = String::new();
    input.read_line(&mut line)?;
    let header: EnsembleHeader =
        serde_json::from_str(line.trim_end()).map_err(|e| Error::Format(format!("header: {e}")))?;
    if header.format != FORMAT_TAG || header.version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format {} v{}",
            header.format, header.version
        )));
    }
    if header.grid.len() != header.n_rx {
        return Err(Error::Format("grid length disagrees with n_rx".into()));
    }
    let total = header.n_tx * header.n_rx * header.n_taps;
    let mut taps = Vec::with_capacity(total);
    match header.encoding {
        EnsembleEncoding::Text => {
            for (i, line) in input.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 5 {
                    return Err(Error::Format(format!("line {}: expected 5 fields", i + 2)));
                }
                let expect = [
                    taps.len() / (header.n_rx * header.n_taps),
                    taps.len() / header.n_taps % header.n_rx,
                    taps.len() % header.n_taps,
                ];
                for (f, e) in fields[..3].iter().zip(expect) {
                    if f.parse::<usize>().ok() != Some(e) {
                        return Err(Error::Format(format!("line {}: out-of-order index", i + 2)));
                    }
                }
                let parse = |s: &str| {
                    s.parse::<f64>()
                        .map_err(|e| Error::Format(format!("line {}: {e}", i + 2)))
                };
                taps.push(C64::new(parse(fields[3])?, parse(fields[4])?));
            }
        }
        EnsembleEncoding::Binary => {
            let mut buf = [0u8; 16];
            for _ in 0..total {
                input
                    .read_exact(&mut buf)
                    .map_err(|e| Error::Format(format!("truncated tap data: {e}")))?;
                let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
                let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
                taps.push(C64::new(re, im));
            }
        }
    }
    if taps.len() != total {
        return Err(Error::Format(format!(
            "expected {total} taps, found {}",
            taps.len()
        )));
    }
    let fs = header.params.sample_rate_hz();
    let fc = header.params.carrier_hz;
    let mut chunks = taps.chunks(header.n_taps.max(1));
    let cirs = (0..header.n_tx)
        .map(|_| {
            (0..header.n_rx)
                .map(|_| Cir::new(chunks.next().unwrap().to_vec(), fs, fc))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let ensemble = ChannelEnsemble::new(cirs, header.params, header.grid.clone())?;
    Ok((ensemble, header))
}
