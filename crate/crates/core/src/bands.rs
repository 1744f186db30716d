//! Signal band constants.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Band {
    X1,
    X5,
    L1CA,
    L5,
}

/// Carrier and code parameters of one signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSpec {
    pub band: Band,
    pub carrier_frequency: f64,
    pub chip_rate: f64,
    pub code_length: usize,
    /// Pilot overlay length in chips.
    pub overlay_length: usize,
    pub symbol_duration: f64,
}

impl Band {
    pub const ALL: [Band; 4] = [Band::X1, Band::X5, Band::L1CA, Band::L5];

    pub fn spec(self) -> BandSpec {
        let f0 = 10.23e6;
        let (carrier_frequency, chip_rate, code_length, overlay_length, symbol_duration) =
            match self {
                Band::X1 => (155.75 * f0, 1.023e6, 1023, 100, 1e-3),
                Band::X5 => (116.375 * f0, 10.23e6, 10230, 100, 2e-3),
                Band::L1CA => (154.0 * f0, 1.023e6, 1023, 1, 20e-3),
                Band::L5 => (115.0 * f0, 10.23e6, 10230, 10, 10e-3),
            };
        BandSpec {
            band: self,
            carrier_frequency,
            chip_rate,
            code_length,
            overlay_length,
            symbol_duration,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Band::X1 => "x1",
            Band::X5 => "x5",
            Band::L1CA => "l1ca",
            Band::L5 => "l5",
        }
    }

    pub fn carrier(self) -> f64 {
        self.spec().carrier_frequency
    }

    /// True for the L1-band signals.
    pub fn is_l1(self) -> bool {
        matches!(self, Band::X1 | Band::L1CA)
    }
}

impl FromStr for Band {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x1" => Ok(Band::X1),
            "x5" => Ok(Band::X5),
            "l1ca" | "l1" | "l1-ca" => Ok(Band::L1CA),
            "l5" => Ok(Band::L5),
            other => Err(Error::config(format!(
                "unknown band `{other}` (expected x1|x5|l1ca|l5)"
            ))),
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carriers() {
        assert_eq!(Band::X1.carrier(), 1593.3225e6);
        assert_eq!(Band::X5.carrier(), 1190.51625e6);
        assert_eq!(Band::L1CA.carrier(), 1575.42e6);
        assert_eq!(Band::L5.carrier(), 1176.45e6);
        assert_eq!(Band::X5.spec().chip_rate, 10.23e6);
    }

    #[test]
    fn data_rate_identity() {
        let s = Band::X5.spec();
        assert!((8.0 / s.symbol_duration - 4000.0).abs() < 1e-9);
    }

    #[test]
    fn parse_names() {
        for b in Band::ALL {
            assert_eq!(b.name().parse::<Band>().unwrap(), b);
        }
        assert!("l2".parse::<Band>().is_err());
    }
}
