//! CSK(256,2): one byte per symbol as a left circular shift of the X5
//! primary code, repeated over two code periods.
//!
//! The metric of shift v is the correlation of the whole block with the
//! shifted code divided by two, so a noiseless block scores the code length.

use crate::bands::Band;
use crate::codes::correlation::Correlator;
use crate::codes::ChipSequence;
use crate::error::{Error, Result};

pub const ALPHABET: usize = 256;
pub const PERIODS_PER_SYMBOL: usize = 2;
pub const PRN_LENGTH: usize = 10230;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CskSymbol {
    pub value: u8,
}

impl CskSymbol {
    pub fn new(value: u32) -> Result<Self> {
        u8::try_from(value)
            .map(|value| Self { value })
            .map_err(|_| Error::usage(format!("CSK symbol {value} outside 0..=255")))
    }

    pub fn shift(self) -> usize {
        self.value as usize
    }

    /// Two X5 code periods.
    pub fn duration(self) -> f64 {
        PERIODS_PER_SYMBOL as f64 * Band::X5.spec().code_length as f64 / Band::X5.spec().chip_rate
    }

    /// Most significant bit first.
    pub fn from_bits(bits: [u8; 8]) -> Self {
        Self { value: bits.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1)) }
    }

    pub fn bits(self) -> [u8; 8] {
        std::array::from_fn(|i| (self.value >> (7 - i)) & 1)
    }
}

/// Data rate in bit/s.
pub fn bit_rate() -> f64 {
    8.0 / CskSymbol { value: 0 }.duration()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CskDecision {
    pub value: u8,
    pub metric: f64,
    /// best / second best; infinite when the runner-up is not positive.
    pub margin: f64,
}

fn check_prn(prn: &ChipSequence) -> Result<()> {
    if prn.len() != PRN_LENGTH {
        return Err(Error::usage(format!("CSK needs a {PRN_LENGTH}-chip code, got {}", prn.len())));
    }
    Ok(())
}

/// Two periods of `prn` shifted left by `symbol` chips.
pub fn csk_modulate(prn: &ChipSequence, symbol: u32) -> Result<Vec<i8>> {
    check_prn(prn)?;
    let s = CskSymbol::new(symbol)?;
    let shifted = prn.rotate_left(s.shift());
    Ok(shifted.chips.iter().chain(&shifted.chips).copied().collect())
}

fn check_block(rx: &[f64]) -> Result<()> {
    if rx.len() != PERIODS_PER_SYMBOL * PRN_LENGTH {
        return Err(Error::usage(format!(
            "CSK block must hold {} chips, got {}",
            PERIODS_PER_SYMBOL * PRN_LENGTH,
            rx.len()
        )));
    }
    Ok(())
}

fn metric_direct(rx: &[f64], prn: &[i8], v: usize) -> f64 {
    let n = prn.len();
    let mut acc = 0.0;
    for p in 0..PERIODS_PER_SYMBOL {
        let blk = &rx[p * n..(p + 1) * n];
        // chip i of the shifted code is prn[(i + v) mod n]
        let (head, tail) = prn.split_at(v);
        let mut s = 0.0;
        for (x, &c) in blk.iter().zip(tail.iter().chain(head)) {
            s += x * c as f64;
        }
        acc += s;
    }
    acc / PERIODS_PER_SYMBOL as f64
}

fn decide(metrics: &[f64]) -> CskDecision {
    let mut best = 0;
    for v in 1..metrics.len() {
        if metrics[v] > metrics[best] {
            best = v;
        }
    }
    let second = metrics
        .iter()
        .enumerate()
        .filter(|(v, _)| *v != best)
        .map(|(_, &m)| m)
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = if second <= 0.0 { f64::INFINITY } else { metrics[best] / second };
    CskDecision { value: best as u8, metric: metrics[best], margin }
}

/// 256 direct correlations; ties go to the smallest shift.
pub fn csk_demodulate(rx: &[f64], prn: &ChipSequence) -> Result<CskDecision> {
    check_prn(prn)?;
    check_block(rx)?;
    let metrics: Vec<f64> = (0..ALPHABET).map(|v| metric_direct(rx, &prn.chips, v)).collect();
    Ok(decide(&metrics))
}

/// FFT demodulator: folds the two periods, correlates once, and recomputes
/// exactly every shift whose transform metric is within rounding noise of
/// the two leaders, so its decisions equal the direct correlator's.
pub struct FftDemodulator {
    prn: ChipSequence,
    cor: Correlator,
    spectrum: Vec<rustfft::num_complex::Complex64>,
}

impl FftDemodulator {
    pub fn new(prn: &ChipSequence) -> Result<Self> {
        check_prn(prn)?;
        let cor = Correlator::new(PRN_LENGTH);
        let code: Vec<f64> = prn.chips.iter().map(|&c| c as f64).collect();
        let spectrum = cor.spectrum(&code);
        Ok(Self { prn: prn.clone(), cor, spectrum })
    }

    pub fn demodulate(&self, rx: &[f64]) -> Result<CskDecision> {
        check_block(rx)?;
        let n = PRN_LENGTH;
        let folded: Vec<f64> = (0..n).map(|i| rx[i] + rx[i + n]).collect();
        let mut values = Vec::with_capacity(n);
        self.cor.correlate_spectra(&self.cor.spectrum(&folded), &self.spectrum, &mut values);
        let mut metrics: Vec<f64> = values[..ALPHABET].iter().map(|v| v / PERIODS_PER_SYMBOL as f64).collect();
        let scale: f64 = rx.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        let tol = 1e-9 * scale;
        let mut order: Vec<usize> = (0..ALPHABET).collect();
        order.sort_by(|&a, &b| metrics[b].total_cmp(&metrics[a]));
        let first = metrics[order[0]];
        let second = order.iter().map(|&v| metrics[v]).find(|&m| m < first - tol).unwrap_or(first);
        for v in 0..ALPHABET {
            if metrics[v] >= second - tol {
                metrics[v] = metric_direct(rx, &self.prn.chips, v);
            }
        }
        // Keep the runner-up exact as well when it is unique.
        Ok(decide(&metrics))
    }
}

/// Signed 8-bit stream to soft chips.
pub fn chips_from_i8_stream(bytes: &[u8]) -> Vec<f64> {
    bytes.iter().map(|&b| b as i8 as f64).collect()
}

pub fn chips_to_i8_stream(chips: &[i8]) -> Vec<u8> {
    chips.iter().map(|&c| c as u8).collect()
}

/// Decisions CSV: index, value, metric, margin.
pub fn decisions_csv(decisions: &[CskDecision]) -> String {
    let mut s = String::from("index,value,metric,margin\n");
    for (i, d) in decisions.iter().enumerate() {
        let margin = if d.margin.is_finite() { format!("{:.6}", d.margin) } else { "inf".into() };
        s.push_str(&format!("{i},{},{:.6},{margin}\n", d.value, d.metric));
    }
    s
}

pub fn read_decisions_csv(text: &str) -> Result<Vec<CskDecision>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let bad = || Error::Parse { line, message: "malformed decision row".into() };
        let idx: usize = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if idx != i {
            return Err(Error::Parse { line, message: "decision index out of sequence".into() });
        }
        out.push(CskDecision {
            value: rec.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?,
            metric: rec.get(2).and_then(|s| s.parse().ok()).ok_or_else(bad)?,
            margin: match rec.get(3) {
                Some("inf") => f64::INFINITY,
                s => s.and_then(|s| s.parse().ok()).ok_or_else(bad)?,
            },
        });
    }
    Ok(out)
}
