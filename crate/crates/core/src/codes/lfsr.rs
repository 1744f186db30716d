//! Fibonacci LFSRs with stage numbering 1..=degree.
//!
//! Each clock outputs the last stage, shifts every stage one place toward
//! the output and loads stage 1 with the XOR of the tap stages. Taps
//! `(3, 10)` are the polynomial 1 + x^3 + x^10.

use super::{ChipSequence, Family};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrSpec {
    pub degree: usize,
    /// Feedback stages, 1-based; must include `degree`.
    pub taps: Vec<usize>,
    /// Stage 1 first.
    pub initial_state: Vec<u8>,
}

impl LfsrSpec {
    pub fn new(degree: usize, taps: &[usize], initial_state: &[u8]) -> Result<Self> {
        let s = Self { degree, taps: taps.to_vec(), initial_state: initial_state.to_vec() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=32).contains(&self.degree) {
            return Err(Error::config(format!("LFSR degree {} outside 2..=32", self.degree)));
        }
        if !self.taps.contains(&self.degree) || self.taps.iter().any(|&t| t == 0 || t > self.degree) {
            return Err(Error::config(format!(
                "taps {:?} must lie in 1..={} and include {}",
                self.taps, self.degree, self.degree
            )));
        }
        if self.initial_state.len() != self.degree {
            return Err(Error::config(format!(
                "initial state has {} bits, register has {}",
                self.initial_state.len(),
                self.degree
            )));
        }
        if self.initial_state.iter().any(|&b| b > 1) {
            return Err(Error::config("initial state bits must be 0 or 1"));
        }
        Ok(())
    }

    /// Whether the taps give period 2^degree - 1 (checked by running the register).
    pub fn is_primitive(&self) -> bool {
        primitive(self.degree, &self.taps)
    }
}

pub(crate) fn primitive(degree: usize, taps: &[usize]) -> bool {
    if degree > 24 {
        return false;
    }
    let mut state = vec![0u8; degree];
    state[0] = 1;
    let start = state.clone();
    let full = (1usize << degree) - 1;
    let mut r = Lfsr { taps: taps.to_vec(), state };
    for k in 1..=full {
        r.clock();
        if r.state == start {
            return k == full;
        }
    }
    false
}

/// Bit-level register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    taps: Vec<usize>,
    /// Stage 1 at index 0.
    state: Vec<u8>,
}

impl Lfsr {
    pub fn new(spec: &LfsrSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { taps: spec.taps.clone(), state: spec.initial_state.clone() })
    }

    pub fn state(&self) -> &[u8] {
        &self.state
    }

    pub fn reset(&mut self, state: &[u8]) {
        self.state.copy_from_slice(state);
    }

    #[inline]
    pub fn output(&self) -> u8 {
        self.state[self.state.len() - 1]
    }

    /// Clock once and return the bit that was output.
    #[inline]
    pub fn clock(&mut self) -> u8 {
        let out = self.output();
        let fb = self.taps.iter().fold(0u8, |acc, &t| acc ^ self.state[t - 1]);
        self.state.rotate_right(1);
        self.state[0] = fb;
        out
    }

    pub fn bits(&mut self, n: usize) -> Vec<u8> {
        (0..n).map(|_| self.clock()).collect()
    }
}

/// `n` chips of the m-sequence defined by `spec`.
pub fn msequence(spec: &LfsrSpec, n: usize) -> Result<ChipSequence> {
    spec.validate()?;
    if !spec.is_primitive() {
        return Err(Error::domain(format!("taps {:?} are not primitive", spec.taps)));
    }
    if spec.initial_state.iter().all(|&b| b == 0) {
        return Err(Error::domain("all-zero initial state gives an all-zero sequence"));
    }
    let mut r = Lfsr::new(spec)?;
    Ok(ChipSequence::from_bits(&r.bits(n), Family::MSequence, 0.0))
}
