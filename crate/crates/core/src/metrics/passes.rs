use crate::bands::Band;
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::observables::Observable;

/// One rise-to-set interval above a mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassRecord {
    pub svid: u32,
    pub prn_id: u32,
    pub plane_index: usize,
    pub shell_index: usize,
    pub mask: f64,
    pub rise: f64,
    pub set: f64,
    pub duration: f64,
    pub max_elevation: f64,
    pub range_rate_at_rise: f64,
    /// Cut by the start or end of the observation window.
    pub truncated: bool,
}

impl PassRecord {
    pub fn doppler_at_rise(&self, band: Band) -> f64 {
        -self.range_rate_at_rise / SPEED_OF_LIGHT * band.carrier()
    }
}

#[derive(Debug, Clone, Copy)]
struct OpenPass {
    rise: f64,
    max_elevation: f64,
    range_rate_at_rise: f64,
    truncated: bool,
}

/// Incremental pass builder for one satellite and one mask.
#[derive(Debug, Clone, Default)]
pub(crate) struct PassTracker {
    open: Option<OpenPass>,
}

impl PassTracker {
    pub fn rise(&mut self, at: &Observable, truncated: bool) {
        self.open = Some(OpenPass {
            rise: at.time,
            max_elevation: at.elevation,
            range_rate_at_rise: at.range_rate,
            truncated,
        });
    }

    pub fn update(&mut self, elevation: f64) {
        if let Some(p) = &mut self.open {
            p.max_elevation = p.max_elevation.max(elevation);
        }
    }

    pub fn is_open(&self) -> bool {
        self.open.is_some()
    }

    pub fn set(&mut self, at: &Observable, mask: f64, truncated: bool) -> Option<PassRecord> {
        let p = self.open.take()?;
        Some(PassRecord {
            svid: at.svid,
            prn_id: at.prn_id,
            plane_index: at.plane_index,
            shell_index: at.shell_index,
            mask,
            rise: p.rise,
            set: at.time,
            duration: at.time - p.rise,
            max_elevation: p.max_elevation.max(at.elevation),
            range_rate_at_rise: p.range_rate_at_rise,
            truncated: truncated || p.truncated,
        })
    }
}

/// Passes of a single-satellite series sampled on a uniform grid.
///
/// Rise and set instants are linearly interpolated between the bracketing
/// samples. Passes touching either end of the series are flagged truncated.
pub fn extract_passes(series: &[Observable], mask: f64) -> Result<Vec<PassRecord>> {
    if series.len() < 2 {
        return Ok(series
            .iter()
            .filter(|o| o.elevation >= mask)
            .map(|o| PassRecord {
                svid: o.svid,
                prn_id: o.prn_id,
                plane_index: o.plane_index,
                shell_index: o.shell_index,
                mask,
                rise: o.time,
                set: o.time,
                duration: 0.0,
                max_elevation: o.elevation,
                range_rate_at_rise: o.range_rate,
                truncated: true,
            })
            .collect());
    }
    let step = series[1].time - series[0].time;
    if !(step > 0.0) {
        return Err(Error::usage("series must be sorted by strictly increasing time"));
    }
    for w in series.windows(2) {
        if w[1].svid != w[0].svid {
            return Err(Error::usage("series must contain a single satellite"));
        }
        let dt = w[1].time - w[0].time;
        if !(dt > 0.0) {
            return Err(Error::usage("series must be sorted by strictly increasing time"));
        }
        if (dt - step).abs() > 1e-6 * step.max(1.0) {
            return Err(Error::usage("series must use a uniform step"));
        }
    }
    let interp = |a: &Observable, b: &Observable| {
        let w = ((mask - a.elevation) / (b.elevation - a.elevation)).clamp(0.0, 1.0);
        Observable {
            time: a.time + (b.time - a.time) * w,
            elevation: mask,
            range_rate: a.range_rate + (b.range_rate - a.range_rate) * w,
            ..*b
        }
    };
    let mut out = Vec::new();
    let mut tracker = PassTracker::default();
    if series[0].elevation >= mask {
        tracker.rise(&series[0], true);
    }
    for w in series.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        match (a.elevation >= mask, b.elevation >= mask) {
            (false, true) => {
                tracker.rise(&interp(a, b), false);
                tracker.update(b.elevation);
            }
            (true, false) => {
                out.extend(tracker.set(&interp(a, b), mask, false));
            }
            (true, true) => tracker.update(b.elevation),
            (false, false) => {}
        }
    }
    if tracker.is_open() {
        out.extend(tracker.set(series.last().unwrap(), mask, true));
    }
    Ok(out)
}

/// Duration statistics over complete (non-truncated) passes.
pub fn duration_summary(passes: &[PassRecord]) -> Option<(f64, f64, f64, f64)> {
    let mut d: Vec<f64> = passes
        .iter()
        .filter(|p| !p.truncated)
        .map(|p| p.duration)
        .collect();
    if d.is_empty() {
        return None;
    }
    d.sort_by(f64::total_cmp);
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let median = if d.len() % 2 == 1 {
        d[d.len() / 2]
    } else {
        0.5 * (d[d.len() / 2 - 1] + d[d.len() / 2])
    };
    Some((d[0], mean, median, d[d.len() - 1]))
}
