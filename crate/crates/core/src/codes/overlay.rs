//! Cross-correlation check of a 100-chip overlay code set.

use super::correlation::Correlator;
use super::ChipSequence;
use crate::error::{Error, Result};

pub const OVERLAY_LENGTH: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct OverlayReport {
    /// 20 log10(max |corr| / 100) over distinct pairs and all lags.
    pub max_db: f64,
    pub max_abs: i64,
    pub worst_pair: (usize, usize),
    /// Per-pair maxima in dB, row-major over i < j.
    pub pairs: Vec<(usize, usize, f64)>,
}

pub fn to_db(corr: i64, length: usize) -> f64 {
    20.0 * (corr.abs() as f64 / length as f64).log10()
}

pub fn overlay_check(codes: &[ChipSequence]) -> Result<OverlayReport> {
    if codes.len() < 2 {
        return Err(Error::usage("overlay check needs at least two codes"));
    }
    if let Some(bad) = codes.iter().position(|c| c.len() != OVERLAY_LENGTH) {
        return Err(Error::usage(format!(
            "overlay code {bad} has {} chips, expected {OVERLAY_LENGTH}",
            codes[bad].len()
        )));
    }
    let cor = Correlator::new(OVERLAY_LENGTH);
    let mut pairs = Vec::new();
    let mut best = (i64::MIN, (0, 1));
    for i in 0..codes.len() {
        for j in i + 1..codes.len() {
            let m = cor.correlate(&codes[i], &codes[j])?.max_abs();
            pairs.push((i, j, to_db(m, OVERLAY_LENGTH)));
            if m > best.0 {
                best = (m, (i, j));
            }
        }
    }
    Ok(OverlayReport { max_db: to_db(best.0, OVERLAY_LENGTH), max_abs: best.0, worst_pair: best.1, pairs })
}
