//! Planner calibration: observer-side extremes per orbit class, taken from a
//! mean-radius 3-day sweep over the default latitudes.
//!
//! Values are physical (m/s, m/s^2) so one table serves every band. The
//! built-in table is embedded; `from_sweep` regenerates it.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::OrbitClass;
use crate::constants::SPEED_OF_LIGHT;
use crate::bands::Band;
use crate::error::{Error, Result};
use crate::metrics::SweepResults;

const BUILTIN: &str = include_str!("calibration.csv");

/// Quantities stored per orbit class.
pub const MAX_RANGE_RATE: &str = "max_abs_range_rate_mps";
pub const MIN_SAME_PLANE_RATE_DIFF: &str = "min_same_plane_range_rate_diff_mps";
pub const MAX_RANGE_ACCEL: &str = "max_abs_range_accel_mps2";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClassCalibration {
    /// Largest |range rate| over samples at or above each integer elevation 0..=90.
    pub max_range_rate: Vec<f64>,
    /// Smallest same-plane |range-rate difference| per mask, degrees.
    pub min_same_plane_diff: Vec<(f64, f64)>,
    /// Largest |range acceleration| per mask.
    pub max_range_accel: Vec<(f64, f64)>,
}

impl ClassCalibration {
    /// Doppler limit in Hz for satellites at or above `elevation`.
    pub fn doppler_limit(&self, band: Band, elevation: f64) -> Result<f64> {
        if !(0.0..=90.0).contains(&elevation) || self.max_range_rate.len() != 91 {
            return Err(Error::usage(format!("elevation {elevation} outside 0..=90")));
        }
        let lo = elevation.floor() as usize;
        let hi = (lo + 1).min(90);
        let w = elevation - lo as f64;
        let rr = self.max_range_rate[lo] * (1.0 - w) + self.max_range_rate[hi] * w;
        Ok(rr * band.carrier() / SPEED_OF_LIGHT)
    }

    fn by_mask(table: &[(f64, f64)], mask: f64, what: &str) -> Result<f64> {
        let first = table.first().ok_or_else(|| Error::coverage(format!("no {what} calibration")))?;
        let last = table.last().unwrap();
        if mask < first.0 || mask > last.0 {
            return Err(Error::coverage(format!(
                "mask {mask} outside calibrated range {}..{} for {what}; recompute the sweep",
                first.0, last.0
            )));
        }
        for w in table.windows(2) {
            if mask >= w[0].0 && mask <= w[1].0 {
                let t = (mask - w[0].0) / (w[1].0 - w[0].0);
                return Ok(w[0].1 + (w[1].1 - w[0].1) * t);
            }
        }
        Ok(first.1)
    }

    /// Smallest same-plane Doppler difference in Hz at `mask`.
    pub fn min_same_plane_doppler_diff(&self, band: Band, mask: f64) -> Result<f64> {
        Ok(Self::by_mask(&self.min_same_plane_diff, mask, "same-plane difference")? * band.carrier() / SPEED_OF_LIGHT)
    }

    /// Largest |Doppler rate| in Hz/s at `mask`.
    pub fn max_doppler_rate(&self, band: Band, mask: f64) -> Result<f64> {
        Ok(Self::by_mask(&self.max_range_accel, mask, "Doppler rate")? * band.carrier() / SPEED_OF_LIGHT)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Calibration {
    pub classes: BTreeMap<OrbitClass, ClassCalibration>,
}

impl Calibration {
    pub fn builtin() -> Self {
        Self::read_csv(BUILTIN.as_bytes()).expect("embedded calibration table parses")
    }

    pub fn class(&self, c: OrbitClass) -> Result<&ClassCalibration> {
        self.classes
            .get(&c)
            .ok_or_else(|| Error::coverage(format!("no calibration for orbit class {}", c.as_str())))
    }

    /// Build from a sweep; shells map to orbit classes by name.
    pub fn from_sweep(results: &SweepResults) -> Result<Self> {
        let all = results.combined(|_| true).ok_or_else(|| Error::coverage("empty sweep"))?;
        let mut out = Calibration::default();
        for (s, name) in results.shells.iter().enumerate() {
            let Ok(class) = name.parse::<OrbitClass>() else { continue };
            let g = s + 1;
            let mut max_rr = vec![0.0; 91];
            let mut run = 0.0f64;
            for deg in (0..=90).rev() {
                if let Some(v) = all.range_rate_by_elevation[g][deg].max_abs() {
                    run = run.max(v);
                }
                max_rr[deg] = run;
            }
            let mut diffs = Vec::new();
            let mut accel = Vec::new();
            for (m, &mask) in all.masks.iter().enumerate() {
                let e = &all.same_plane[s][m].range_rate;
                if !e.is_empty() {
                    diffs.push((mask, e.min));
                }
                if let Some(a) = all.samples[g][m].range_accel.max_abs() {
                    accel.push((mask, a));
                }
            }
            out.classes.insert(class, ClassCalibration { max_range_rate: max_rr, min_same_plane_diff: diffs, max_range_accel: accel });
        }
        if out.classes.is_empty() {
            return Err(Error::coverage("sweep has no inclined, polar or gps shell"));
        }
        Ok(out)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["orbit_class", "quantity", "key_deg", "value"])?;
        for (c, cal) in &self.classes {
            for (deg, v) in cal.max_range_rate.iter().enumerate() {
                wr.write_record([c.as_str(), MAX_RANGE_RATE, &format!("{deg}"), &format!("{v:.6}")])?;
            }
            for (m, v) in &cal.min_same_plane_diff {
                wr.write_record([c.as_str(), MIN_SAME_PLANE_RATE_DIFF, &format!("{m}"), &format!("{v:.6}")])?;
            }
            for (m, v) in &cal.max_range_accel {
                wr.write_record([c.as_str(), MAX_RANGE_ACCEL, &format!("{m}"), &format!("{v:.6}")])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut out = Calibration::default();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let bad = |m: &str| Error::Parse { line, message: m.to_string() };
            let class: OrbitClass = rec.get(0).ok_or_else(|| bad("missing class"))?.parse().map_err(|_| bad("unknown orbit class"))?;
            let key: f64 = rec.get(2).and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad key"))?;
            let value: f64 = rec.get(3).and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad value"))?;
            let cal = out.classes.entry(class).or_default();
            match rec.get(1) {
                Some(MAX_RANGE_RATE) => {
                    if key != cal.max_range_rate.len() as f64 {
                        return Err(bad("elevation keys must run 0, 1, ..., 90"));
                    }
                    cal.max_range_rate.push(value);
                }
                Some(MIN_SAME_PLANE_RATE_DIFF) => cal.min_same_plane_diff.push((key, value)),
                Some(MAX_RANGE_ACCEL) => cal.max_range_accel.push((key, value)),
                _ => return Err(bad("unknown quantity")),
            }
        }
        for (c, cal) in &out.classes {
            if cal.max_range_rate.len() != 91 {
                return Err(Error::Parse { line: 0, message: format!("{} needs 91 elevation rows", c.as_str()) });
            }
        }
        Ok(out)
    }
}
