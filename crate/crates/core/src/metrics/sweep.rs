//! Parallel multi-observer runs and (latitude x mask) sweep tables.

use std::fmt;

use rayon::prelude::*;

use super::collector::{Collector, MetricsConfig, ObserverStats};
use super::Extent;
use crate::bands::Band;
use crate::constants::SPEED_OF_LIGHT;
use crate::constellation::{AltitudeReference, Constellation};
use crate::error::{Error, Result};
use crate::geodesy::Observer;
use crate::sim::{scan, TimeGrid};

/// Default latitude grid, degrees.
pub const DEFAULT_LATITUDES: [f64; 8] = [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0, -45.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Elevation,
    PassDuration,
    InView,
    PlanesInView,
    SamePlaneCount,
    Range,
    Doppler(Band),
    DopplerRate(Band),
    DopplerRateDerivative(Band),
    RangeDiff,
    SamePlaneRangeDiff,
    SamePlaneDopplerDiff(Band),
    SamePlaneDopplerRateDiff(Band),
}

impl Metric {
    pub fn name(&self) -> String {
        match self {
            Metric::Elevation => "elevation_deg".into(),
            Metric::PassDuration => "pass_duration_s".into(),
            Metric::InView => "in_view".into(),
            Metric::PlanesInView => "planes_in_view".into(),
            Metric::SamePlaneCount => "same_plane_count".into(),
            Metric::Range => "range_m".into(),
            Metric::Doppler(b) => format!("doppler_{b}_hz"),
            Metric::DopplerRate(b) => format!("doppler_rate_{b}_hzps"),
            Metric::DopplerRateDerivative(b) => format!("doppler_rate_derivative_{b}_hzps2"),
            Metric::RangeDiff => "range_diff_m".into(),
            Metric::SamePlaneRangeDiff => "same_plane_range_diff_m".into(),
            Metric::SamePlaneDopplerDiff(b) => format!("same_plane_doppler_diff_{b}_hz"),
            Metric::SamePlaneDopplerRateDiff(b) => format!("same_plane_doppler_rate_diff_{b}_hzps"),
        }
    }

    pub fn parse(s: &str) -> Result<Metric> {
        let bands = Band::ALL;
        let simple = [
            Metric::Elevation,
            Metric::PassDuration,
            Metric::InView,
            Metric::PlanesInView,
            Metric::SamePlaneCount,
            Metric::Range,
            Metric::RangeDiff,
            Metric::SamePlaneRangeDiff,
        ];
        let banded: Vec<Metric> = bands
            .iter()
            .flat_map(|&b| {
                [
                    Metric::Doppler(b),
                    Metric::DopplerRate(b),
                    Metric::DopplerRateDerivative(b),
                    Metric::SamePlaneDopplerDiff(b),
                    Metric::SamePlaneDopplerRateDiff(b),
                ]
            })
            .collect();
        simple
            .into_iter()
            .chain(banded)
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown metric `{s}`")))
    }

    /// Every metric, one band per banded family.
    pub fn catalog(band: Band) -> Vec<Metric> {
        vec![
            Metric::Elevation,
            Metric::PassDuration,
            Metric::InView,
            Metric::PlanesInView,
            Metric::SamePlaneCount,
            Metric::Range,
            Metric::Doppler(band),
            Metric::DopplerRate(band),
            Metric::DopplerRateDerivative(band),
            Metric::RangeDiff,
            Metric::SamePlaneRangeDiff,
            Metric::SamePlaneDopplerDiff(band),
            Metric::SamePlaneDopplerRateDiff(band),
        ]
    }

    fn same_plane(&self) -> bool {
        matches!(
            self,
            Metric::SamePlaneRangeDiff
                | Metric::SamePlaneDopplerDiff(_)
                | Metric::SamePlaneDopplerRateDiff(_)
        )
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// min / avg / max of one sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub min: f64,
    pub avg: f64,
    pub max: f64,
    pub count: u64,
}

impl Cell {
    fn from_extent(e: &Extent, scale: f64) -> Option<Cell> {
        let avg = e.mean()?;
        let (a, b) = (e.min * scale, e.max * scale);
        Some(Cell {
            min: a.min(b),
            avg: avg * scale,
            max: a.max(b),
            count: e.count,
        })
    }
}

fn carrier_scale(b: Band) -> f64 {
    -b.carrier() / SPEED_OF_LIGHT
}

/// Cell of `metric` for group `g` (0 = all, s + 1 = shell s) at mask index `m`.
pub fn cell(stats: &ObserverStats, metric: Metric, g: usize, m: usize) -> Option<Cell> {
    let s = &stats.samples[g][m];
    match metric {
        Metric::Elevation => Cell::from_extent(&s.elevation, 1.0),
        Metric::Range => Cell::from_extent(&s.range, 1.0),
        Metric::Doppler(b) => Cell::from_extent(&s.range_rate, carrier_scale(b)),
        Metric::DopplerRate(b) => Cell::from_extent(&s.range_accel, carrier_scale(b)),
        Metric::DopplerRateDerivative(b) => Cell::from_extent(&s.range_jerk, carrier_scale(b)),
        Metric::InView => Cell::from_extent(&stats.in_view[g][m], 1.0),
        Metric::PlanesInView => Cell::from_extent(&stats.planes_in_view[g][m], 1.0),
        Metric::SamePlaneCount => Cell::from_extent(&stats.same_plane_max[g][m], 1.0),
        Metric::RangeDiff => Cell::from_extent(&stats.range_diff[g][m], 1.0),
        Metric::PassDuration => {
            let mask = stats.masks[m];
            let mut e = Extent::default();
            for p in &stats.passes {
                if !p.truncated && p.mask == mask && (g == 0 || p.shell_index + 1 == g) {
                    e.push(p.duration);
                }
            }
            Cell::from_extent(&e, 1.0)
        }
        Metric::SamePlaneRangeDiff | Metric::SamePlaneDopplerDiff(_) | Metric::SamePlaneDopplerRateDiff(_) => {
            let shells: Vec<usize> = if g == 0 {
                (0..stats.shells.len()).collect()
            } else {
                vec![g - 1]
            };
            let mut e = Extent::default();
            for sh in shells {
                let sp = &stats.same_plane[sh][m];
                e.merge(match metric {
                    Metric::SamePlaneRangeDiff => &sp.range,
                    Metric::SamePlaneDopplerDiff(_) => &sp.range_rate,
                    _ => &sp.range_accel,
                });
            }
            let scale = match metric {
                Metric::SamePlaneDopplerDiff(b) | Metric::SamePlaneDopplerRateDiff(b) => {
                    b.carrier() / SPEED_OF_LIGHT
                }
                _ => 1.0,
            };
            Cell::from_extent(&e, scale)
        }
    }
}

/// One metric as a function of latitude and mask.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub metric: Metric,
    pub group: String,
    pub latitudes: Vec<f64>,
    pub masks: Vec<f64>,
    /// `cells[latitude][mask]`; `None` when nothing was visible.
    pub cells: Vec<Vec<Option<Cell>>>,
}

impl SweepTable {
    pub fn get(&self, latitude: f64, mask: f64) -> Option<Cell> {
        let i = self.latitudes.iter().position(|&l| l == latitude)?;
        let j = self.masks.iter().position(|&m| (m - mask).abs() < 1e-9)?;
        self.cells[i][j]
    }

    /// Column-wise extreme over latitudes: (min of mins, max of maxes).
    pub fn extremes_at(&self, mask: f64) -> Option<(f64, f64)> {
        let j = self.masks.iter().position(|&m| (m - mask).abs() < 1e-9)?;
        let cells: Vec<Cell> = self.cells.iter().filter_map(|r| r[j]).collect();
        if cells.is_empty() {
            return None;
        }
        Some((
            cells.iter().map(|c| c.min).fold(f64::INFINITY, f64::min),
            cells.iter().map(|c| c.max).fold(f64::NEG_INFINITY, f64::max),
        ))
    }
}

/// Per-observer statistics of one constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResults {
    pub constellation: String,
    pub reference: AltitudeReference,
    pub shells: Vec<String>,
    pub masks: Vec<f64>,
    pub observers: Vec<ObserverStats>,
}

impl SweepResults {
    pub fn latitudes(&self) -> Vec<f64> {
        self.observers.iter().map(|o| o.latitude).collect()
    }

    /// Group index for `all` or a shell name.
    pub fn group_index(&self, name: &str) -> Result<usize> {
        if name == "all" {
            return Ok(0);
        }
        self.shells
            .iter()
            .position(|s| s == name)
            .map(|i| i + 1)
            .ok_or_else(|| Error::usage(format!("unknown group `{name}`")))
    }

    pub fn group_name(&self, g: usize) -> &str {
        if g == 0 {
            "all"
        } else {
            &self.shells[g - 1]
        }
    }

    pub fn observer(&self, latitude: f64) -> Option<&ObserverStats> {
        self.observers.iter().find(|o| o.latitude == latitude)
    }

    /// Pooled statistics of the observers whose latitude passes `keep`.
    pub fn combined(&self, keep: impl Fn(f64) -> bool) -> Option<ObserverStats> {
        let mut it = self.observers.iter().filter(|o| keep(o.latitude));
        let mut acc = it.next()?.clone();
        for o in it {
            acc.merge(o).expect("observers of one sweep share layout");
        }
        Some(acc)
    }

    pub fn table(&self, metric: Metric, group: &str) -> Result<SweepTable> {
        let g = self.group_index(group)?;
        if metric.same_plane() && self.shells.is_empty() {
            return Err(Error::usage("same-plane metrics need at least one shell"));
        }
        Ok(SweepTable {
            metric,
            group: group.to_string(),
            latitudes: self.latitudes(),
            masks: self.masks.clone(),
            cells: self
                .observers
                .iter()
                .map(|o| (0..self.masks.len()).map(|m| cell(o, metric, g, m)).collect())
                .collect(),
        })
    }
}

/// Run one observer per latitude (longitude and height shared) in parallel.
/// Results come back in latitude-list order regardless of `workers`.
pub fn run_sweep(
    constellation: &Constellation,
    latitudes: &[f64],
    longitude: f64,
    height_m: f64,
    grid: &TimeGrid,
    cfg: &MetricsConfig,
    workers: Option<usize>,
) -> Result<SweepResults> {
    if latitudes.is_empty() {
        return Err(Error::config("latitude list is empty"));
    }
    let observers = latitudes
        .iter()
        .map(|&lat| Observer::new(lat, longitude, height_m))
        .collect::<Result<Vec<_>>>()?;
    let work = || -> Result<Vec<ObserverStats>> {
        observers
            .par_iter()
            .map(|obs| {
                let mut c = Collector::new(constellation, obs.latitude_deg, cfg.clone())?;
                scan(constellation, obs, grid, &cfg.masks, &mut c)?;
                Ok(c.into_stats())
            })
            .collect()
    };
    let stats = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    Ok(SweepResults {
        constellation: constellation.name.clone(),
        reference: constellation.altitude_reference,
        shells: constellation.shells.iter().map(|s| s.name.clone()).collect(),
        masks: cfg.masks.clone(),
        observers: stats,
    })
}
