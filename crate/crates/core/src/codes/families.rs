//! Kasami small set and Gold family construction.

use super::correlation::circular_correlation;
use super::{ChipSequence, Family};
use crate::error::{Error, Result};

/// Whether `c` has the two-level autocorrelation of an m-sequence and a
/// period of the form 2^k - 1.
pub fn is_msequence(c: &ChipSequence) -> bool {
    let n = c.len();
    if n < 3 || !(n + 1).is_power_of_two() {
        return false;
    }
    match circular_correlation(c, c) {
        Ok(p) => p.values[1..].iter().all(|&v| v == -1),
        Err(_) => false,
    }
}

/// `out[i] = c[(q * i) mod n]` over `count` chips.
pub fn decimate(c: &ChipSequence, q: usize, count: usize) -> ChipSequence {
    let n = c.len();
    ChipSequence {
        chips: (0..count).map(|i| c.chips[(q * i) % n]).collect(),
        family: Family::Custom,
        chip_rate: c.chip_rate,
    }
}

/// The 32-member small set generated by a period-1023 m-sequence `u`.
///
/// Member 0 is `u`; member `k + 1` is `u` times the `k`-chip left shift of
/// `w`, the decimation of `u` by 33 (period 31, repeated).
pub fn kasami_small_set(u: &ChipSequence) -> Result<Vec<ChipSequence>> {
    if u.len() != 1023 || !is_msequence(u) {
        return Err(Error::domain("Kasami base must be an m-sequence of period 1023"));
    }
    let w = decimate(u, 33, 1023);
    if w.period() != 31 {
        return Err(Error::domain("decimated sequence does not have period 31"));
    }
    let mut out = vec![u.clone().with_family(Family::Kasami)];
    for k in 0..31 {
        out.push(u.xor(&w.rotate_left(k))?.with_family(Family::Kasami));
    }
    Ok(out)
}

/// Whether the cross-correlation of `u` and `v` takes only the three Gold values.
pub fn is_preferred_pair(u: &ChipSequence, v: &ChipSequence) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::usage("length mismatch"));
    }
    let n = u.len();
    let k = (n + 1).trailing_zeros();
    if !(n + 1).is_power_of_two() || k % 4 == 0 || !is_msequence(u) || !is_msequence(v) {
        return Ok(false);
    }
    let t = 1 + (1i64 << ((k + 2) / 2));
    let p = circular_correlation(u, v)?;
    Ok(p.values.iter().all(|&x| x == -1 || x == -t || x == t - 2))
}

/// `u` times the `shift`-chip left shift of `v`, for a preferred pair.
pub fn gold_pair(u: &ChipSequence, v: &ChipSequence, shift: usize) -> Result<ChipSequence> {
    if !is_preferred_pair(u, v)? {
        return Err(Error::domain("sequences are not a preferred pair"));
    }
    Ok(u.xor(&v.rotate_left(shift))?.with_family(Family::Gold))
}

/// All n + 2 members: `u`, `v` and every shifted product.
pub fn gold_family(u: &ChipSequence, v: &ChipSequence) -> Result<Vec<ChipSequence>> {
    if !is_preferred_pair(u, v)? {
        return Err(Error::domain("sequences are not a preferred pair"));
    }
    let mut out = vec![u.clone().with_family(Family::Gold), v.clone().with_family(Family::Gold)];
    for s in 0..u.len() {
        out.push(u.xor(&v.rotate_left(s))?.with_family(Family::Gold));
    }
    Ok(out)
}
