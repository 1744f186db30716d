//! Time-stepped visibility scan of one constellation from one observer.
//!
//! The scan evaluates every satellite on a uniform grid, hands the visible
//! observables of each epoch to an [`EpochSink`], and reports mask
//! crossings with the observable linearly interpolated to the crossing
//! instant.

use crate::constellation::{propagate, Constellation, EcefState};
use crate::error::{Error, Result};
use crate::geodesy::{Observer, TopocentricFrame};
use crate::observables::{observe, Observable};

/// Uniform sampling grid `t_k = start + k * step`, `0 <= k < count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(start: f64, duration: f64, step: f64) -> Result<Self> {
        if !(duration > 0.0) || !(step > 0.0) || !duration.is_finite() || !step.is_finite() {
            return Err(Error::config(format!(
                "duration {duration} s and step {step} s must be positive"
            )));
        }
        let count = (duration / step + 1e-9).floor() as usize;
        if count == 0 {
            return Err(Error::config("duration shorter than one step"));
        }
        Ok(Self { start, step, count })
    }

    pub fn days(days: f64, step: f64) -> Result<Self> {
        Self::new(0.0, days * crate::constants::SECONDS_PER_DAY, step)
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.time(self.count - 1)
    }
}

/// A satellite crossing a mask between two samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Index into `Constellation::satellites`.
    pub sat: usize,
    pub mask_index: usize,
    pub rising: bool,
    /// Observable interpolated to the crossing; its elevation equals the mask.
    pub at: Observable,
}

pub trait EpochSink {
    /// `visible` holds satellites at or above the lowest mask, in
    /// constellation order, each tagged with its satellite index.
    fn epoch(&mut self, k: usize, t: f64, visible: &[(usize, Observable)]);

    /// Called before the epoch that completes the crossing.
    fn crossing(&mut self, _c: &Crossing) {}

    fn finish(&mut self, _grid: &TimeGrid) {}
}

fn lerp_obs(a: &Observable, b: &Observable, w: f64, elevation: f64) -> Observable {
    let l = |x: f64, y: f64| x + (y - x) * w;
    let (azimuth, zenith) = if (b.azimuth - a.azimuth).abs() > 180.0 {
        // Do not interpolate across north.
        if w < 0.5 { (a.azimuth, a.zenith) } else { (b.azimuth, b.zenith) }
    } else {
        (l(a.azimuth, b.azimuth), false)
    };
    Observable {
        time: l(a.time, b.time),
        elevation,
        azimuth,
        zenith,
        range: l(a.range, b.range),
        range_rate: l(a.range_rate, b.range_rate),
        range_accel: l(a.range_accel, b.range_accel),
        range_jerk: l(a.range_jerk, b.range_jerk),
        ..*b
    }
}

/// Scan `constellation` from `observer` over `grid`.
///
/// `masks` must be sorted ascending; the lowest one bounds the visible set.
pub fn scan<S: EpochSink>(
    constellation: &Constellation,
    observer: &Observer,
    grid: &TimeGrid,
    masks: &[f64],
    sink: &mut S,
) -> Result<()> {
    if masks.is_empty() {
        return Err(Error::config("at least one elevation mask is required"));
    }
    if masks.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::config("masks must be sorted ascending"));
    }
    let frame = observer.frame();
    let sats = &constellation.satellites;
    let mut prev: Vec<Option<(EcefState, f64)>> = vec![None; sats.len()];
    let mut visible = Vec::with_capacity(sats.len());
    for k in 0..grid.count {
        let t = grid.time(k);
        visible.clear();
        for (i, sat) in sats.iter().enumerate() {
            let state = propagate(sat, t);
            let el = elevation(&frame, &state);
            if let Some((pstate, pel)) = prev[i] {
                for (m, &mask) in masks.iter().enumerate() {
                    let was = pel >= mask;
                    let is = el >= mask;
                    if was != is {
                        let a = observe(&frame, sat, &pstate);
                        let b = observe(&frame, sat, &state);
                        let w = ((mask - pel) / (el - pel)).clamp(0.0, 1.0);
                        sink.crossing(&Crossing {
                            sat: i,
                            mask_index: m,
                            rising: is,
                            at: lerp_obs(&a, &b, w, mask),
                        });
                    }
                }
            }
            if el >= masks[0] {
                let mut o = observe(&frame, sat, &state);
                // Keep the visibility decision and the reported value consistent.
                o.elevation = el;
                visible.push((i, o));
            }
            prev[i] = Some((state, el));
        }
        sink.epoch(k, t, &visible);
    }
    sink.finish(grid);
    Ok(())
}

#[inline]
fn elevation(frame: &TopocentricFrame, state: &EcefState) -> f64 {
    crate::observables::elevation_deg(frame, state)
}

/// Collects every visible observable; meant for small runs and tests.
#[derive(Debug, Default)]
pub struct Recorder {
    pub rows: Vec<Observable>,
    pub crossings: Vec<Crossing>,
}

impl EpochSink for Recorder {
    fn epoch(&mut self, _k: usize, _t: f64, visible: &[(usize, Observable)]) {
        self.rows.extend(visible.iter().map(|(_, o)| *o));
    }

    fn crossing(&mut self, c: &Crossing) {
        self.crossings.push(*c);
    }
}

/// Observable series of one satellite at every grid epoch, visible or not.
pub fn satellite_series(
    constellation: &Constellation,
    sat_index: usize,
    observer: &Observer,
    grid: &TimeGrid,
) -> Vec<Observable> {
    let frame = observer.frame();
    let sat = &constellation.satellites[sat_index];
    (0..grid.count)
        .map(|k| observe(&frame, sat, &propagate(sat, grid.time(k))))
        .collect()
}
