//! Circular correlation through the FFT, exact to the integer.
//!
//! `values[k] = sum_i a[i] * b[(i + k) mod n]`.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::ChipSequence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationProfile {
    pub values: Vec<i64>,
    /// Lag-zero value.
    pub peak: i64,
    /// Largest magnitude over lags 1..n.
    pub max_off_peak: i64,
}

impl CorrelationProfile {
    pub fn from_values(values: Vec<i64>) -> Self {
        let peak = values[0];
        let max_off_peak = values[1..].iter().map(|v| v.abs()).max().unwrap_or(0);
        Self { values, peak, max_off_peak }
    }

    /// Largest magnitude over every lag.
    pub fn max_abs(&self) -> i64 {
        self.max_off_peak.max(self.peak.abs())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lag,value\n");
        for (k, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

/// Cached forward/inverse plans for one length.
pub struct Correlator {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Correlator {
    pub fn new(n: usize) -> Self {
        let mut p = FftPlanner::new();
        Self { n, fwd: p.plan_fft_forward(n), inv: p.plan_fft_inverse(n) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spectrum(&self, x: &[f64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Real circular correlation of two spectra, `values[k] = sum a[i] b[i+k]`.
    pub fn correlate_spectra(&self, a: &[Complex64], b: &[Complex64], out: &mut Vec<f64>) {
        let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x.conj() * y).collect();
        self.inv.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        out.clear();
        out.extend(buf.iter().map(|c| c.re * scale));
    }

    pub fn correlate_real(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n);
        self.correlate_spectra(&self.spectrum(a), &self.spectrum(b), &mut out);
        out
    }

    /// Integer correlation of two chip sequences.
    pub fn correlate(&self, a: &ChipSequence, b: &ChipSequence) -> Result<CorrelationProfile> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::usage(format!(
                "correlation length mismatch: {} and {} against {}",
                a.len(),
                b.len(),
                self.n
            )));
        }
        let fa = self.spectrum(&to_f64(a));
        let fb = self.spectrum(&to_f64(b));
        let mut out = Vec::new();
        self.correlate_spectra(&fa, &fb, &mut out);
        Ok(CorrelationProfile::from_values(round_exact(&out)))
    }
}

pub(crate) fn to_f64(c: &ChipSequence) -> Vec<f64> {
    c.chips.iter().map(|&x| x as f64).collect()
}

/// Round FFT output to integers. Chip correlations are integers and the
/// transform error is far below one half for any supported length.
pub(crate) fn round_exact(x: &[f64]) -> Vec<i64> {
    x.iter()
        .map(|&v| {
            let r = v.round();
            assert!((v - r).abs() < 0.25, "FFT correlation lost integer exactness");
            r as i64
        })
        .collect()
}

pub fn circular_correlation(a: &ChipSequence, b: &ChipSequence) -> Result<CorrelationProfile> {
    if a.len() != b.len() {
        return Err(Error::usage(format!("correlation length mismatch: {} vs {}", a.len(), b.len())));
    }
    Correlator::new(a.len()).correlate(a, b)
}

/// Extremes of a code family over every ordered pair and every lag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyCorrelation {
    /// Largest off-peak autocorrelation magnitude.
    pub max_auto: i64,
    /// Largest cross-correlation magnitude between distinct members.
    pub max_cross: i64,
    /// Member pair reaching `max_cross`, smallest indices first.
    pub worst_pair: (usize, usize),
    /// Number of (pair, lag) evaluations.
    pub evaluations: u64,
}

impl FamilyCorrelation {
    pub fn max(&self) -> i64 {
        self.max_auto.max(self.max_cross)
    }
}

/// Exhaustive correlation sweep. Cross terms cover every unordered pair at
/// every lag, which also covers the reversed order.
pub fn family_correlation(codes: &[ChipSequence]) -> Result<FamilyCorrelation> {
    let n = codes.first().map(|c| c.len()).ok_or_else(|| Error::usage("empty family"))?;
    if codes.iter().any(|c| c.len() != n) {
        return Err(Error::usage("family members differ in length"));
    }
    let cor = Correlator::new(n);
    let spectra: Vec<Vec<Complex64>> = codes.iter().map(|c| cor.spectrum(&to_f64(c))).collect();
    let m = codes.len();
    let per_row = |i: usize| -> (i64, i64, (usize, usize)) {
        let mut out = Vec::with_capacity(n);
        cor.correlate_spectra(&spectra[i], &spectra[i], &mut out);
        let auto = round_exact(&out)[1..].iter().map(|v| v.abs()).max().unwrap_or(0);
        let mut cross = (i64::MIN, (i, i));
        for j in i + 1..m {
            cor.correlate_spectra(&spectra[i], &spectra[j], &mut out);
            let v = round_exact(&out).iter().map(|v| v.abs()).max().unwrap_or(0);
            if v > cross.0 {
                cross = (v, (i, j));
            }
        }
        (auto, cross.0, cross.1)
    };
    let rows: Vec<(i64, i64, (usize, usize))> = (0..m).into_par_iter().map(per_row).collect();
    let max_auto = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let (max_cross, worst_pair) = rows
        .iter()
        .filter(|r| r.1 != i64::MIN)
        .fold((0i64, (0usize, 0usize)), |acc, r| if r.1 > acc.0 { (r.1, r.2) } else { acc });
    Ok(FamilyCorrelation {
        max_auto,
        max_cross,
        worst_pair,
        evaluations: (m * (m + 1) / 2 * n) as u64,
    })
}
