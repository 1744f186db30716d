//! Overlay-code delay candidates in whole milliseconds.
//!
//! Relative mode bounds the delay of a new satellite against a tracked one
//! by the largest range difference at the mask. Precise-time mode bounds
//! the absolute delay between the smallest and largest range.

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::metrics::{Metric, StatsStore};

/// Range bounds per elevation mask, metres.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayBounds {
    pub masks: Vec<f64>,
    pub max_range_diff: Vec<f64>,
    pub min_range: Vec<f64>,
    pub max_range: Vec<f64>,
}

const TABLE_MASKS: [f64; 5] = [0.0, 5.0, 10.0, 15.0, 20.0];

impl DelayBounds {
    /// Published Pulsar FOC extremes over all latitudes.
    pub fn pulsar() -> Self {
        Self {
            masks: TABLE_MASKS.to_vec(),
            max_range_diff: km(&[2795.7, 2294.0, 1855.0, 1489.6, 1193.9]),
            min_range: km(&[1080.0; 5]),
            max_range: km(&[3900.7, 3393.0, 2955.7, 2592.2, 2294.2]),
        }
    }

    /// Published GPS extremes over all latitudes.
    pub fn gps() -> Self {
        Self {
            masks: TABLE_MASKS.to_vec(),
            max_range_diff: km(&[5586.4, 5054.8, 4523.3, 4000.1, 3500.9]),
            min_range: km(&[20187.0; 5]),
            max_range: km(&[25788.0, 25257.0, 24723.0, 24208.0, 23716.0]),
        }
    }

    /// Bounds recomputed from stored sweep cells (group `all`, every latitude).
    pub fn from_store(store: &StatsStore, constellation: &str) -> Result<Self> {
        let masks = store.masks(constellation);
        if masks.is_empty() {
            return Err(Error::coverage(format!("no sweep stored for {constellation}")));
        }
        let lats = store.latitudes(constellation);
        let mut out = Self { masks: Vec::new(), max_range_diff: Vec::new(), min_range: Vec::new(), max_range: Vec::new() };
        for &m in &masks {
            let mut diff = f64::NEG_INFINITY;
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &lat in &lats {
                if let Some(Some(c)) = store.get(constellation, "all", Metric::RangeDiff, lat, m) {
                    diff = diff.max(c.max);
                }
                if let Some(Some(c)) = store.get(constellation, "all", Metric::Range, lat, m) {
                    lo = lo.min(c.min);
                    hi = hi.max(c.max);
                }
            }
            if diff.is_finite() && lo.is_finite() {
                out.masks.push(m);
                out.max_range_diff.push(diff);
                out.min_range.push(lo);
                out.max_range.push(hi);
            }
        }
        if out.masks.is_empty() {
            return Err(Error::coverage(format!("stored sweep for {constellation} lacks range cells")));
        }
        Ok(out)
    }

    fn interp(&self, values: &[f64], mask: f64) -> Result<f64> {
        let (first, last) = (self.masks[0], *self.masks.last().unwrap());
        if !(mask >= first && mask <= last) {
            return Err(Error::coverage(format!(
                "mask {mask} outside the {first}..{last} deg delay bounds; recompute the sweep for this mask"
            )));
        }
        for (i, w) in self.masks.windows(2).enumerate() {
            if mask <= w[1] {
                let t = (mask - w[0]) / (w[1] - w[0]);
                return Ok(values[i] + (values[i + 1] - values[i]) * t);
            }
        }
        Ok(values[0])
    }

    /// Largest delay difference in ms.
    pub fn max_delay_diff_ms(&self, mask: f64) -> Result<f64> {
        Ok(self.interp(&self.max_range_diff, mask)? / SPEED_OF_LIGHT * 1e3)
    }

    /// (smallest, largest) one-way delay in ms.
    pub fn delay_span_ms(&self, mask: f64) -> Result<(f64, f64)> {
        Ok((
            self.interp(&self.min_range, mask)? / SPEED_OF_LIGHT * 1e3,
            self.interp(&self.max_range, mask)? / SPEED_OF_LIGHT * 1e3,
        ))
    }
}

fn km(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x * 1e3).collect()
}

/// Sign of the delay of the new satellite relative to the tracked one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignHint {
    Later,
    Earlier,
}

impl SignHint {
    /// Heuristic: a satellite rising at the horizon is farther than one
    /// already tracked, so it arrives later. Not guaranteed.
    pub fn rising_satellite() -> Self {
        SignHint::Later
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DelayMode {
    RelativeToTracked { mask: f64, sign: Option<SignHint> },
    PreciseTime { mask: f64, clock_uncertainty_ms: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayWindow {
    pub start_ms: f64,
    pub end_ms: f64,
    /// Whole-millisecond parts a delay in the window can take, ascending.
    pub candidates: Vec<i64>,
}

impl DelayWindow {
    pub fn span_ms(&self) -> f64 {
        self.end_ms - self.start_ms
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OverlayDelays {
    /// Signed offsets ordered by magnitude, positive first.
    Relative { max_delay_diff_ms: f64, offsets_ms: Vec<i64> },
    Absolute(DelayWindow),
}

impl OverlayDelays {
    pub fn len(&self) -> usize {
        match self {
            OverlayDelays::Relative { offsets_ms, .. } => offsets_ms.len(),
            OverlayDelays::Absolute(w) => w.candidates.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> &[i64] {
        match self {
            OverlayDelays::Relative { offsets_ms, .. } => offsets_ms,
            OverlayDelays::Absolute(w) => &w.candidates,
        }
    }
}

/// Candidate overlay delays. Relative magnitudes run to the nearest whole
/// millisecond of the largest delay difference.
pub fn overlay_delay_candidates(mode: DelayMode, bounds: &DelayBounds) -> Result<OverlayDelays> {
    match mode {
        DelayMode::RelativeToTracked { mask, sign } => {
            let dt = bounds.max_delay_diff_ms(mask)?;
            let n = dt.round() as i64;
            let mut offsets = vec![0];
            for k in 1..=n {
                match sign {
                    None => offsets.extend([k, -k]),
                    Some(SignHint::Later) => offsets.push(k),
                    Some(SignHint::Earlier) => offsets.push(-k),
                }
            }
            Ok(OverlayDelays::Relative { max_delay_diff_ms: dt, offsets_ms: offsets })
        }
        DelayMode::PreciseTime { mask, clock_uncertainty_ms } => {
            if !(clock_uncertainty_ms >= 0.0) || !clock_uncertainty_ms.is_finite() {
                return Err(Error::usage("clock uncertainty must be a non-negative number of ms"));
            }
            let (lo, hi) = bounds.delay_span_ms(mask)?;
            let start = lo - clock_uncertainty_ms;
            let end = hi + clock_uncertainty_ms;
            let candidates = (start.floor() as i64..=end.floor() as i64).collect();
            Ok(OverlayDelays::Absolute(DelayWindow { start_ms: start, end_ms: end, candidates }))
        }
    }
}
