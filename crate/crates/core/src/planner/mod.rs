//! Acquisition search planning: Doppler bin order, Doppler-rate envelope,
//! overlay delay candidates and integration budgets.

pub mod budget;
pub mod calibration;
pub mod doppler;
pub mod envelope;
pub mod overlay_delay;

pub use budget::{bin_width, carrier_to_code, code_shift_budget, max_coherent_integration, time_for_shift, Budget};
pub use calibration::{Calibration, ClassCalibration};
pub use doppler::{plan_doppler, Bin, Environment, Phase, PlanOptions, PrnState, Scenario, SearchPlan, Strategy};
pub use envelope::{rate_envelope, RateEnvelope};
pub use overlay_delay::{overlay_delay_candidates, DelayBounds, DelayMode, DelayWindow, OverlayDelays, SignHint};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitClass {
    Inclined,
    Polar,
    Gps,
}

impl OrbitClass {
    pub fn as_str(self) -> &'static str {
        match self {
            OrbitClass::Inclined => "inclined",
            OrbitClass::Polar => "polar",
            OrbitClass::Gps => "gps",
        }
    }

    /// Pulsar PRN IDs 1..=12 fly inclined planes and 13..=18 polar planes.
    pub fn from_prn(prn: u32) -> Option<Self> {
        match prn {
            1..=12 => Some(OrbitClass::Inclined),
            13..=18 => Some(OrbitClass::Polar),
            _ => None,
        }
    }
}

impl FromStr for OrbitClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inclined" => Ok(OrbitClass::Inclined),
            "polar" => Ok(OrbitClass::Polar),
            "gps" => Ok(OrbitClass::Gps),
            other => Err(Error::usage(format!("unknown orbit class `{other}` (inclined|polar|gps)"))),
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
