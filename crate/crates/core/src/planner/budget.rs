//! Closed-form integration budgets.

use crate::bands::Band;
use crate::error::{Error, Result};

/// A time budget; `Unbounded` when the drift that limits it is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Seconds(f64),
    Unbounded,
}

impl Budget {
    pub fn seconds(self) -> Option<f64> {
        match self {
            Budget::Seconds(s) => Some(s),
            Budget::Unbounded => None,
        }
    }
}

/// Longest coherent integration before a Doppler rate `rate` (Hz/s) drifts
/// the signal by `fraction` of a 1/(2 T) bin: T = sqrt(fraction / (2 rate)).
pub fn max_coherent_integration(rate: f64, fraction: f64) -> Result<Budget> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::usage(format!("bin fraction {fraction} outside (0, 1]")));
    }
    if !rate.is_finite() {
        return Err(Error::usage("Doppler rate must be finite"));
    }
    if rate <= 0.0 {
        return Ok(Budget::Unbounded);
    }
    Ok(Budget::Seconds((fraction / (2.0 * rate)).sqrt()))
}

/// Frequency step 1/(2 T) of a coherent integration time T.
pub fn bin_width(cit: f64) -> f64 {
    1.0 / (2.0 * cit)
}

/// Code shift in chips after `duration` seconds at `code_doppler` chip/s.
pub fn code_shift_budget(code_doppler: f64, duration: f64) -> f64 {
    code_doppler * duration
}

/// Time for the code to slip by `chips` at `code_doppler` chip/s.
pub fn time_for_shift(code_doppler: f64, chips: f64) -> Result<Budget> {
    if !code_doppler.is_finite() || !chips.is_finite() || chips < 0.0 {
        return Err(Error::usage("code Doppler and chip count must be finite, chips non-negative"));
    }
    if code_doppler == 0.0 {
        return Ok(Budget::Unbounded);
    }
    Ok(Budget::Seconds(chips / code_doppler.abs()))
}

/// Carrier-domain quantity (Doppler Hz, rate Hz/s, ...) expressed on the
/// code of `band` (chip/s, chip/s^2, ...).
pub fn carrier_to_code(band: Band, value: f64) -> f64 {
    let s = band.spec();
    value * s.chip_rate / s.carrier_frequency
}
