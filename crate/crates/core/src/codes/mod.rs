//! Spreading codes: LFSR m-sequences, Kasami and Gold families, the X1 and
//! X5 generator structures, overlay checks and circular correlation.
//!
//! Chips are +/-1 internally. Bits map 0 -> +1 and 1 -> -1.

pub mod assignment;
pub mod correlation;
pub mod families;
pub mod generators;
pub mod lfsr;
pub mod overlay;

pub use assignment::{CodeAssignment, CodeRef};
pub use correlation::{circular_correlation, family_correlation, Correlator, CorrelationProfile, FamilyCorrelation};
pub use families::{decimate, gold_family, gold_pair, is_msequence, is_preferred_pair, kasami_small_set};
pub use generators::{x1_generator, x5_generator, X1Generator, X5Generator};
pub use lfsr::{msequence, Lfsr, LfsrSpec};
pub use overlay::{overlay_check, OverlayReport};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    MSequence,
    Kasami,
    Gold,
    Overlay,
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::MSequence => "m-seq",
            Family::Kasami => "kasami",
            Family::Gold => "gold",
            Family::Overlay => "overlay",
            Family::Custom => "custom",
        }
    }
}

/// A +/-1 spreading sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ChipSequence {
    pub chips: Vec<i8>,
    pub family: Family,
    /// chip/s; 0 when not meaningful.
    pub chip_rate: f64,
}

#[inline]
pub fn bit_to_chip(b: u8) -> i8 {
    if b & 1 == 0 { 1 } else { -1 }
}

#[inline]
pub fn chip_to_bit(c: i8) -> u8 {
    u8::from(c < 0)
}

impl ChipSequence {
    pub fn new(chips: Vec<i8>, family: Family, chip_rate: f64) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::usage("empty chip sequence"));
        }
        if chips.iter().any(|&c| c != 1 && c != -1) {
            return Err(Error::usage("chips must be +1 or -1"));
        }
        Ok(Self { chips, family, chip_rate })
    }

    pub fn from_bits(bits: &[u8], family: Family, chip_rate: f64) -> Self {
        Self { chips: bits.iter().map(|&b| bit_to_chip(b)).collect(), family, chip_rate }
    }

    pub fn bits(&self) -> Vec<u8> {
        self.chips.iter().map(|&c| chip_to_bit(c)).collect()
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    /// Number of -1 chips (ones in bit form).
    pub fn ones(&self) -> usize {
        self.chips.iter().filter(|&&c| c < 0).count()
    }

    /// Sum of chips; |sum| <= 1 for a balanced odd-length code.
    pub fn imbalance(&self) -> i64 {
        self.chips.iter().map(|&c| c as i64).sum()
    }

    /// Chip-wise product, the +/-1 form of XOR.
    pub fn xor(&self, other: &ChipSequence) -> Result<ChipSequence> {
        if self.len() != other.len() {
            return Err(Error::usage("length mismatch"));
        }
        Ok(ChipSequence {
            chips: self.chips.iter().zip(&other.chips).map(|(a, b)| a * b).collect(),
            family: Family::Custom,
            chip_rate: self.chip_rate,
        })
    }

    /// Left circular shift: `out[i] = self[(i + k) mod n]`.
    pub fn rotate_left(&self, k: usize) -> ChipSequence {
        let mut chips = self.chips.clone();
        let n = chips.len();
        chips.rotate_left(k % n);
        ChipSequence { chips, ..*self }
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    /// Smallest period.
    pub fn period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .filter(|p| n % p == 0)
            .find(|&p| (0..n).all(|i| self.chips[i] == self.chips[(i + p) % n]))
            .unwrap_or(n)
    }

    pub fn to_bit_text(&self) -> String {
        self.chips.iter().map(|&c| if c < 0 { '1' } else { '0' }).collect()
    }

    pub fn from_bit_text(text: &str, family: Family, chip_rate: f64) -> Result<Self> {
        let mut bits = Vec::new();
        for ch in text.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse { line: 1, message: format!("invalid chip character {c:?}") }),
            }
        }
        if bits.is_empty() {
            return Err(Error::Parse { line: 1, message: "no chips".into() });
        }
        Ok(Self::from_bits(&bits, family, chip_rate))
    }

    /// Upper-case hex, most significant bit first, last digit zero-padded.
    pub fn to_hex(&self) -> String {
        self.bits()
            .chunks(4)
            .map(|c| {
                let v = c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b << (3 - i)));
                char::from_digit(v as u32, 16).unwrap().to_ascii_uppercase()
            })
            .collect()
    }

    /// Inverse of [`to_hex`](Self::to_hex); `length` drops the padding.
    pub fn from_hex(text: &str, length: Option<usize>, family: Family, chip_rate: f64) -> Result<Self> {
        let digits: Vec<u32> = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_digit(16).ok_or_else(|| Error::Parse { line: 1, message: format!("invalid hex digit {c:?}") }))
            .collect::<Result<_>>()?;
        let mut bits: Vec<u8> =
            digits.iter().flat_map(|&d| (0..4).rev().map(move |i| ((d >> i) & 1) as u8)).collect();
        let n = length.unwrap_or(bits.len());
        if n == 0 || n > bits.len() || bits.len() - n >= 4 {
            return Err(Error::Parse { line: 1, message: format!("hex text does not hold {n} chips") });
        }
        if bits[n..].iter().any(|&b| b != 0) {
            return Err(Error::Parse { line: 1, message: "non-zero padding bits".into() });
        }
        bits.truncate(n);
        Ok(Self::from_bits(&bits, family, chip_rate))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_formats_roundtrip() {
        let c = ChipSequence::from_bits(&[1, 0, 1, 1, 0, 0, 1], Family::Custom, 0.0);
        assert_eq!(c.to_bit_text(), "1011001");
        assert_eq!(c.to_hex(), "B2");
        assert_eq!(ChipSequence::from_hex("B2", Some(7), Family::Custom, 0.0).unwrap(), c);
        assert_eq!(ChipSequence::from_bit_text(&c.to_bit_text(), Family::Custom, 0.0).unwrap(), c);
        assert!(ChipSequence::from_hex("B3", Some(7), Family::Custom, 0.0).is_err());
    }

    #[test]
    fn rotation_direction() {
        let c = ChipSequence::from_bits(&[1, 0, 0, 0], Family::Custom, 0.0);
        assert_eq!(c.rotate_left(1).bits(), vec![0, 0, 0, 1]);
    }
}
