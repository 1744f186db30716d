//! Run configuration for simulations and sweeps, read from key=value text.

use std::path::PathBuf;

use crate::constellation::{build_nominal_named, AltitudeReference, Constellation};
use crate::error::{Error, Result};
use crate::kv::{KvDocument, KvWriter};
use crate::metrics::sweep::DEFAULT_LATITUDES;
use crate::metrics::MetricsConfig;
use crate::sim::TimeGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Built-in constellation name; ignored when `constellation_file` is set.
    pub constellation: String,
    pub constellation_file: Option<PathBuf>,
    pub latitudes: Vec<f64>,
    pub longitude: f64,
    pub height_m: f64,
    pub duration_days: f64,
    pub step_s: f64,
    pub masks: Vec<f64>,
    pub altitude_reference: AltitudeReference,
    pub pair_step_s: f64,
    pub histogram_bins: usize,
    /// Log invisible satellite-epochs as well.
    pub log_all: bool,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            constellation: "pulsar-foc".into(),
            constellation_file: None,
            latitudes: DEFAULT_LATITUDES.to_vec(),
            longitude: 0.0,
            height_m: 0.0,
            duration_days: 3.0,
            step_s: 1.0,
            masks: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            altitude_reference: AltitudeReference::Mean,
            pair_step_s: 1.0,
            histogram_bins: 100,
            log_all: false,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_kv(&KvDocument::parse(text)?)
    }

    pub fn from_kv(doc: &KvDocument) -> Result<Self> {
        const KNOWN: [&str; 13] = [
            "constellation",
            "constellation_file",
            "latitudes",
            "longitude",
            "height_m",
            "duration_days",
            "step_s",
            "masks",
            "altitude_reference",
            "pair_step_s",
            "histogram_bins",
            "log_all",
            "output_dir",
        ];
        if let Some(k) = doc.keys().find(|k| !KNOWN.contains(k)) {
            return Err(Error::config(format!("unknown configuration key `{k}`")));
        }
        let d = Self::default();
        let cfg = Self {
            constellation: doc.parse_opt("constellation")?.unwrap_or(d.constellation),
            constellation_file: doc.parse_opt::<String>("constellation_file")?.map(PathBuf::from),
            latitudes: doc.parse_list("latitudes")?.unwrap_or(d.latitudes),
            longitude: doc.parse_opt("longitude")?.unwrap_or(d.longitude),
            height_m: doc.parse_opt("height_m")?.unwrap_or(d.height_m),
            duration_days: doc.parse_opt("duration_days")?.unwrap_or(d.duration_days),
            step_s: doc.parse_opt("step_s")?.unwrap_or(d.step_s),
            masks: doc.parse_list("masks")?.unwrap_or(d.masks),
            altitude_reference: doc.parse_opt("altitude_reference")?.unwrap_or(d.altitude_reference),
            pair_step_s: doc.parse_opt("pair_step_s")?.unwrap_or(d.pair_step_s),
            histogram_bins: doc.parse_opt("histogram_bins")?.unwrap_or(d.histogram_bins),
            log_all: doc.parse_opt("log_all")?.unwrap_or(d.log_all),
            output_dir: doc.parse_opt::<String>("output_dir")?.map(PathBuf::from).unwrap_or(d.output_dir),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_days > 0.0 && self.duration_days.is_finite()) {
            return Err(Error::config("duration_days must be positive"));
        }
        if !(self.step_s > 0.0 && self.step_s.is_finite()) {
            return Err(Error::config("step_s must be positive"));
        }
        if !(self.pair_step_s > 0.0 && self.pair_step_s.is_finite()) {
            return Err(Error::config("pair_step_s must be positive"));
        }
        if self.masks.is_empty() || self.masks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("masks must be non-empty and strictly ascending"));
        }
        if self.masks.iter().any(|m| !(-90.0..=90.0).contains(m)) {
            return Err(Error::config("masks must lie in -90..=90 degrees"));
        }
        if self.latitudes.is_empty() {
            return Err(Error::config("at least one latitude is required"));
        }
        if self.latitudes.iter().any(|l| !(-90.0..=90.0).contains(l)) {
            return Err(Error::config("latitudes must lie in -90..=90 degrees"));
        }
        if !(-180.0..180.0).contains(&self.longitude) {
            return Err(Error::config("longitude must lie in -180..180 degrees"));
        }
        if self.histogram_bins == 0 {
            return Err(Error::config("histogram_bins must be positive"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::days(self.duration_days, self.step_s)
    }

    pub fn metrics_config(&self) -> Result<MetricsConfig> {
        let grid = self.grid()?;
        Ok(MetricsConfig { masks: self.masks.clone(), histogram_bins: self.histogram_bins, ..Default::default() }
            .with_pair_period(&grid, self.pair_step_s))
    }

    pub fn load_constellation(&self) -> Result<Constellation> {
        match &self.constellation_file {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                Constellation::from_kv(&KvDocument::parse(&text)?, Some(self.altitude_reference))
            }
            None => build_nominal_named(&self.constellation, self.altitude_reference),
        }
    }

    pub fn to_document(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut w = KvWriter::new();
        w.comment("run configuration");
        w.entry("constellation", &self.constellation);
        if let Some(p) = &self.constellation_file {
            w.entry("constellation_file", p.display());
        }
        w.entry("latitudes", list(&self.latitudes))
            .entry("longitude", self.longitude)
            .entry("height_m", self.height_m)
            .entry("duration_days", self.duration_days)
            .entry("step_s", self.step_s)
            .entry("masks", list(&self.masks))
            .entry("altitude_reference", self.altitude_reference)
            .entry("pair_step_s", self.pair_step_s)
            .entry("histogram_bins", self.histogram_bins)
            .entry("log_all", self.log_all)
            .entry("output_dir", self.output_dir.display());
        w.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_roundtrip() {
        let c = RunConfig::default();
        assert_eq!(c.grid().unwrap().count, 259_200);
        assert_eq!(RunConfig::from_text(&c.to_document()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_text("step_s = 0").is_err());
        assert!(RunConfig::from_text("masks = 10, 5").is_err());
        assert!(RunConfig::from_text("duration_days = -1").is_err());
        assert!(RunConfig::from_text("colour = blue").is_err());
    }
}
