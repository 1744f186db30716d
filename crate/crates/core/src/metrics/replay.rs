//! Statistics from a recorded observable log instead of live propagation.
//!
//! Rows are grouped into epochs by time. When the log carries invisible
//! rows, mask crossings are interpolated exactly as in a live scan. A
//! visible-only log gives no sample below the lowest mask, so passes at
//! that mask open and close on the first and last logged samples. Epochs
//! missing from such a log (nothing visible) count as empty epochs.

use std::collections::HashMap;

use super::collector::{Collector, MetricsConfig, ObserverStats};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::observables::Observable;
use crate::obslog::ObservableLogRow;
use crate::sim::{Crossing, EpochSink, TimeGrid};

/// Grid step of distinct sorted times: the smallest gap, with every other
/// gap a whole multiple of it (a visible-only log skips empty epochs).
fn grid_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Ok(1.0);
    }
    let step = times.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    for w in times.windows(2) {
        let d = (w[1] - w[0]) / step;
        if (d - d.round()).abs() > 1e-6 * d.max(1.0) {
            return Err(Error::usage(format!(
                "log epochs are not on a uniform grid ({} s gap with a {} s step)",
                w[1] - w[0],
                step
            )));
        }
    }
    Ok(step)
}

fn lerp(a: &Observable, b: &Observable, w: f64, elevation: f64) -> Observable {
    let l = |x: f64, y: f64| x + (y - x) * w;
    Observable {
        time: l(a.time, b.time),
        elevation,
        azimuth: if w < 0.5 { a.azimuth } else { b.azimuth },
        zenith: false,
        range: l(a.range, b.range),
        range_rate: l(a.range_rate, b.range_rate),
        range_accel: l(a.range_accel, b.range_accel),
        range_jerk: l(a.range_jerk, b.range_jerk),
        ..*b
    }
}

/// Replay the rows of one observer latitude through a [`Collector`].
pub fn replay(
    constellation: &Constellation,
    rows: &[ObservableLogRow],
    cfg: MetricsConfig,
) -> Result<ObserverStats> {
    if rows.is_empty() {
        return Err(Error::coverage("observable log has no rows"));
    }
    let latitude = rows[0].latitude_deg;
    if rows.iter().any(|r| r.latitude_deg != latitude) {
        return Err(Error::usage("replay expects rows of a single latitude"));
    }
    let index: HashMap<u32, usize> =
        constellation.satellites.iter().enumerate().map(|(i, s)| (s.svid, i)).collect();
    for r in rows {
        match index.get(&r.svid) {
            None => return Err(Error::usage(format!("svid {} is not in the constellation", r.svid))),
            Some(&i) => {
                let s = &constellation.satellites[i];
                if s.plane_index != r.plane || s.shell_index != r.shell || s.prn_id != r.prn {
                    return Err(Error::usage(format!(
                        "svid {} plane/shell/prn do not match the constellation",
                        r.svid
                    )));
                }
            }
        }
    }
    if rows.windows(2).any(|w| w[1].time_s < w[0].time_s) {
        return Err(Error::usage("observable log is not time-sorted"));
    }
    let mut times: Vec<f64> = Vec::new();
    for r in rows {
        if times.last() != Some(&r.time_s) {
            times.push(r.time_s);
        }
    }
    let step = grid_step(&times)?;
    let t0 = times[0];
    let count = ((times[times.len() - 1] - t0) / step).round() as usize + 1;
    let grid = TimeGrid { start: t0, step, count };
    let masks = cfg.masks.clone();
    let mut col = Collector::new(constellation, latitude, cfg)?;

    let n = constellation.satellites.len();
    let mut prev: Vec<Option<(usize, Observable)>> = vec![None; n];
    let mut visible: Vec<(usize, Observable)> = Vec::new();
    let mut start = 0;
    for k in 0..count {
        let t = grid.time(k);
        let mut end = start;
        while end < rows.len() && ((rows[end].time_s - t0) / step).round() as usize == k {
            end += 1;
        }
        let mut epoch: Vec<(usize, Observable)> =
            rows[start..end].iter().map(|r| (index[&r.svid], r.to_observable())).collect();
        epoch.sort_by_key(|(i, _)| *i);
        if epoch.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::usage(format!("duplicate satellite rows at t = {t}")));
        }
        for (i, o) in &epoch {
            if let Some((pk, p)) = &prev[*i] {
                if *pk + 1 == k {
                    for (m, &mask) in masks.iter().enumerate() {
                        let was = p.elevation >= mask;
                        let is = o.elevation >= mask;
                        if was != is {
                            let w = ((mask - p.elevation) / (o.elevation - p.elevation)).clamp(0.0, 1.0);
                            col.crossing(&Crossing { sat: *i, mask_index: m, rising: is, at: lerp(p, o, w, mask) });
                        }
                    }
                }
            }
        }
        // Satellites that dropped out of a visible-only log set at their last sample.
        for (i, slot) in prev.iter().enumerate() {
            if let Some((pk, p)) = slot {
                if *pk + 1 == k && p.elevation >= masks[0] && epoch.binary_search_by_key(&i, |e| e.0).is_err() {
                    for (m, &mask) in masks.iter().enumerate() {
                        if p.elevation >= mask {
                            col.crossing(&Crossing { sat: i, mask_index: m, rising: false, at: *p });
                        }
                    }
                }
            }
        }
        // Satellites that entered a visible-only log rise at their first sample.
        for (i, o) in &epoch {
            let continued = matches!(prev[*i], Some((pk, _)) if pk + 1 == k);
            if k > 0 && !continued && o.elevation >= masks[0] {
                for (m, &mask) in masks.iter().enumerate() {
                    if o.elevation >= mask {
                        col.crossing(&Crossing { sat: *i, mask_index: m, rising: true, at: *o });
                    }
                }
            }
        }
        visible.clear();
        visible.extend(epoch.iter().filter(|(_, o)| o.elevation >= masks[0]).copied());
        col.epoch(k, t, &visible);
        for (i, o) in epoch {
            prev[i] = Some((k, o));
        }
        start = end;
    }
    col.finish(&grid);
    Ok(col.into_stats())
}
