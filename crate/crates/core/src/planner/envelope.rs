//! Doppler-rate envelope as a function of Doppler.
//!
//! With x = f / f_max the admissible rate interval is
//! [-rate_max ((1 - x^2) + margin x^2) - guard, +guard]: the rate magnitude
//! shrinks quadratically toward the Doppler extremes, and barely changes sign.

use super::calibration::ClassCalibration;
use crate::bands::Band;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEnvelope {
    pub band: Band,
    pub f_max: f64,
    pub rate_max: f64,
    /// Fraction of `rate_max` kept at |f| = f_max.
    pub margin: f64,
    /// Additive guard, Hz/s.
    pub guard: f64,
}

pub const DEFAULT_MARGIN: f64 = 0.05;
pub const DEFAULT_GUARD: f64 = 5.0;
pub const DEFAULT_CONTAINMENT: f64 = 0.999;

impl RateEnvelope {
    /// Envelope from calibration extremes at mask 0.
    pub fn from_calibration(band: Band, cal: &ClassCalibration) -> Result<Self> {
        Ok(Self {
            band,
            f_max: cal.doppler_limit(band, 0.0)?,
            rate_max: cal.max_doppler_rate(band, 0.0)?,
            margin: DEFAULT_MARGIN,
            guard: DEFAULT_GUARD,
        })
    }

    fn shape(&self, f: f64) -> f64 {
        let x2 = (f / self.f_max).powi(2);
        (1.0 - x2) + self.margin * x2
    }

    /// Envelope magnitude without the guard; non-negative on |f| <= f_max.
    pub fn magnitude(&self, f: f64) -> f64 {
        self.rate_max * self.shape(f)
    }

    /// Admissible [lo, hi] Doppler rate at Doppler `f`; `None` beyond f_max.
    pub fn query(&self, f: f64) -> Option<(f64, f64)> {
        if !f.is_finite() || f.abs() > self.f_max {
            return None;
        }
        Some((-self.magnitude(f) - self.guard, self.guard))
    }

    pub fn contains(&self, f: f64, rate: f64) -> bool {
        self.query(f).is_some_and(|(lo, hi)| rate >= lo && rate <= hi)
    }

    /// Fraction of (f, rate) samples inside.
    pub fn containment(&self, samples: &[(f64, f64)]) -> f64 {
        if samples.is_empty() {
            return 1.0;
        }
        samples.iter().filter(|&&(f, r)| self.contains(f, r)).count() as f64 / samples.len() as f64
    }
}

/// Refit `base` on (Doppler Hz, Doppler rate Hz/s) samples: f_max grows to
/// the largest sampled |f| and rate_max is the smallest value keeping at
/// least `target` of the samples inside.
pub fn rate_envelope(base: RateEnvelope, samples: &[(f64, f64)], target: f64) -> Result<RateEnvelope> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::usage(format!("containment target {target} outside (0, 1]")));
    }
    if samples.is_empty() {
        return Ok(base);
    }
    let mut env = base;
    env.f_max = samples.iter().map(|s| s.0.abs()).fold(base.f_max, f64::max);
    let mut need: Vec<f64> = samples
        .iter()
        .map(|&(f, r)| {
            if r > env.guard {
                f64::INFINITY
            } else if r >= -env.guard {
                0.0
            } else {
                (-r - env.guard) / env.shape(f)
            }
        })
        .collect();
    need.sort_by(f64::total_cmp);
    let k = ((target * samples.len() as f64).ceil() as usize).clamp(1, samples.len());
    let r = need[k - 1];
    if !r.is_finite() {
        return Err(Error::domain(format!(
            "more than {:.3}% of samples exceed the positive guard of {} Hz/s",
            (1.0 - target) * 100.0,
            env.guard
        )));
    }
    env.rate_max = r;
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_limits() {
        let e = RateEnvelope { band: Band::X1, f_max: 30000.0, rate_max: 230.0, margin: 0.05, guard: 5.0 };
        assert_eq!(e.query(0.0), Some((-235.0, 5.0)));
        let (lo, hi) = e.query(30000.0).unwrap();
        assert!((lo - (-5.0 - 0.05 * 230.0)).abs() < 1e-9 && hi == 5.0);
        assert!(e.query(30000.1).is_none());
    }

    #[test]
    fn refit_hits_target() {
        let base = RateEnvelope { band: Band::X1, f_max: 1000.0, rate_max: 1.0, margin: 0.05, guard: 0.0 };
        let samples: Vec<(f64, f64)> = (0..1000).map(|i| (0.0, -(i as f64))).collect();
        let e = rate_envelope(base, &samples, 0.999).unwrap();
        assert_eq!(e.rate_max, 998.0);
        assert!(e.containment(&samples) >= 0.999);
    }
}
