//! X1 (three registers, 1023 chips) and X5 (two 13-bit registers, 10230
//! chips) primary code generators.
//!
//! Taps and initial states are inputs; the defaults are the C/A G1/G2 taps,
//! a degree-5 XC register whose sequence is the 33-decimation of XA, and
//! the L5 XA/XB polynomials.

use super::lfsr::{primitive, Lfsr, LfsrSpec};
use super::{ChipSequence, Family};
use crate::bands::Band;
use crate::error::{Error, Result};

pub const X1_LENGTH: usize = 1023;
pub const X5_LENGTH: usize = 10230;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X1Generator {
    pub xa_taps: Vec<usize>,
    pub xb_taps: Vec<usize>,
    pub xc_taps: Vec<usize>,
}

impl Default for X1Generator {
    fn default() -> Self {
        Self { xa_taps: vec![3, 10], xb_taps: vec![2, 3, 6, 8, 9, 10], xc_taps: vec![2, 3, 4, 5] }
    }
}

fn register(name: &str, degree: usize, taps: &[usize], init: &[u8]) -> Result<Lfsr> {
    if init.len() != degree {
        return Err(Error::config(format!(
            "{name} initial state must have {degree} bits, got {}",
            init.len()
        )));
    }
    let spec = LfsrSpec::new(degree, taps, init)?;
    if !primitive(degree, taps) {
        return Err(Error::config(format!("{name} taps {taps:?} are not primitive")));
    }
    Lfsr::new(&spec)
}

impl X1Generator {
    /// XA xor XB xor XC over 1023 chips. An all-zero register contributes
    /// nothing; all three at zero is rejected.
    pub fn generate(&self, xa_init: &[u8], xb_init: &[u8], xc_init: &[u8]) -> Result<ChipSequence> {
        let mut xa = register("XA", 10, &self.xa_taps, xa_init)?;
        let mut xb = register("XB", 10, &self.xb_taps, xb_init)?;
        let mut xc = register("XC", 5, &self.xc_taps, xc_init)?;
        if [xa_init, xb_init, xc_init].iter().all(|s| s.iter().all(|&b| b == 0)) {
            return Err(Error::config("all three registers are zero; the output is degenerate"));
        }
        let bits: Vec<u8> = (0..X1_LENGTH).map(|_| xa.clock() ^ xb.clock() ^ xc.clock()).collect();
        let spec = Band::X1.spec();
        let family = if xb_init.iter().all(|&b| b == 0) {
            Family::Kasami
        } else if xc_init.iter().all(|&b| b == 0) {
            Family::Gold
        } else {
            Family::Custom
        };
        Ok(ChipSequence::from_bits(&bits, family, spec.chip_rate))
    }
}

pub fn x1_generator(xa_init: &[u8], xb_init: &[u8], xc_init: &[u8]) -> Result<ChipSequence> {
    X1Generator::default().generate(xa_init, xb_init, xc_init)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X5Generator {
    pub xa_taps: Vec<usize>,
    pub xb_taps: Vec<usize>,
    pub xa_init: Vec<u8>,
    /// XA is reloaded with `xa_init` after this many chips.
    pub xa_short_cycle: usize,
}

impl Default for X5Generator {
    fn default() -> Self {
        Self {
            xa_taps: vec![9, 10, 12, 13],
            xb_taps: vec![1, 3, 4, 6, 7, 8, 12, 13],
            xa_init: vec![1; 13],
            xa_short_cycle: 8190,
        }
    }
}

impl X5Generator {
    pub fn generate(&self, xb_init: &[u8]) -> Result<ChipSequence> {
        let mut xa = register("XA", 13, &self.xa_taps, &self.xa_init)?;
        let mut xb = register("XB", 13, &self.xb_taps, xb_init)?;
        if xb_init.iter().all(|&b| b == 0) {
            return Err(Error::config("XB initial state must be non-zero"));
        }
        if self.xa_short_cycle == 0 {
            return Err(Error::config("XA short cycle must be positive"));
        }
        let mut bits = Vec::with_capacity(X5_LENGTH);
        for i in 0..X5_LENGTH {
            if i > 0 && i % self.xa_short_cycle == 0 {
                xa.reset(&self.xa_init);
            }
            bits.push(xa.clock() ^ xb.clock());
        }
        Ok(ChipSequence::from_bits(&bits, Family::Custom, Band::X5.spec().chip_rate))
    }
}

pub fn x5_generator(xb_init: &[u8]) -> Result<ChipSequence> {
    X5Generator::default().generate(xb_init)
}

/// Parse "0101..." into bits, stage 1 first.
pub fn parse_state(text: &str) -> Result<Vec<u8>> {
    text.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::config(format!("register state digit {other:?} is not 0 or 1"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_checked() {
        assert!(x1_generator(&[1; 9], &[0; 10], &[1; 5]).is_err());
        assert!(x1_generator(&[1; 10], &[0; 10], &[1; 4]).is_err());
        assert!(x1_generator(&[0; 10], &[0; 10], &[0; 5]).is_err());
        assert!(x5_generator(&[0; 13]).is_err());
    }

    #[test]
    fn x5_length_and_balance() {
        let c = x5_generator(&parse_state("0101011100100").unwrap()).unwrap();
        assert_eq!(c.len(), X5_LENGTH);
        assert!(c.imbalance().abs() < 200);
    }
}
