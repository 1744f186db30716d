use crate::error::{Error, Result};

/// Fixed-edge histogram. Values outside the edges are counted separately so
/// that `total` always equals the number of pushed samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::usage(format!(
                "invalid histogram span [{lo}, {hi}] with {bins} bins"
            )));
        }
        let edges = (0..=bins)
            .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
            .collect();
        Ok(Self {
            edges,
            counts: vec![0; bins],
            total: 0,
            below: 0,
            above: 0,
        })
    }

    /// Uniform bins over the observed span of `values`.
    pub fn from_values(values: &[f64], bins: usize) -> Result<Self> {
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if values.is_empty() {
            return Err(Error::usage("histogram of an empty series"));
        }
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        let mut h = Self::uniform(lo, hi, bins)?;
        for &v in values {
            h.push(v);
        }
        Ok(h)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn push(&mut self, v: f64) {
        self.total += 1;
        let lo = self.edges[0];
        let hi = *self.edges.last().unwrap();
        if v < lo {
            self.below += 1;
        } else if v > hi {
            self.above += 1;
        } else {
            let n = self.bins();
            let idx = (((v - lo) / (hi - lo)) * n as f64) as usize;
            self.counts[idx.min(n - 1)] += 1;
        }
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::usage("cannot merge histograms with different edges"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self.below += other.below;
        self.above += other.above;
        Ok(())
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Mass with bin centers in `[lo, hi)`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> u64 {
        self.centers()
            .iter()
            .zip(&self.counts)
            .filter(|(c, _)| **c >= lo && **c < hi)
            .map(|(_, n)| *n)
            .sum()
    }

    /// Copy with every edge multiplied by a nonzero `k` (unit conversion).
    pub fn scaled(&self, k: f64) -> Histogram {
        let mut h = self.clone();
        for e in &mut h.edges {
            *e *= k;
        }
        if k < 0.0 {
            h.edges.reverse();
            h.counts.reverse();
            std::mem::swap(&mut h.below, &mut h.above);
        }
        h
    }

    /// (lower edge, upper edge, count) rows.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &n)| (w[0], w[1], n))
    }
}
