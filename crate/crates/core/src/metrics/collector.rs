//! Streaming accumulation of per-observer statistics.
//!
//! Samples are binned by "mask band" (elevation between consecutive masks)
//! while streaming and folded into per-mask cells once at the end, so every
//! sample costs one update whatever the number of masks.

use super::histogram::Histogram;
use super::passes::{PassRecord, PassTracker};
use super::Extent;
use crate::constellation::Constellation;
use crate::error::Result;
use crate::observables::Observable;
use crate::sim::{Crossing, EpochSink, TimeGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsConfig {
    /// Ascending elevation masks, degrees.
    pub masks: Vec<f64>,
    /// Pairwise statistics every `pair_stride` epochs.
    pub pair_stride: usize,
    /// Keep (range rate, range acceleration) samples every `envelope_stride`
    /// epochs, starting at `envelope_offset`.
    pub envelope_stride: Option<usize>,
    pub envelope_offset: usize,
    pub histogram_bins: usize,
    /// Histogram span of range rate, +/- m/s.
    pub range_rate_span: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            masks: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            pair_stride: 10,
            envelope_stride: None,
            envelope_offset: 0,
            histogram_bins: 100,
            range_rate_span: 8000.0,
        }
    }
}

impl MetricsConfig {
    /// Pair stride in epochs for a pair period in seconds.
    pub fn with_pair_period(mut self, grid: &TimeGrid, seconds: f64) -> Self {
        self.pair_stride = ((seconds / grid.step).round() as usize).max(1);
        self
    }
}

/// Extents of the per-sample quantities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SampleStats {
    pub elevation: Extent,
    pub range: Extent,
    pub range_rate: Extent,
    pub range_accel: Extent,
    pub range_jerk: Extent,
}

impl SampleStats {
    fn push(&mut self, o: &Observable) {
        self.elevation.push(o.elevation);
        self.range.push(o.range);
        self.range_rate.push(o.range_rate);
        self.range_accel.push(o.range_accel);
        self.range_jerk.push(o.range_jerk);
    }

    /// Interpolated mask-crossing point: extremes only.
    fn touch(&mut self, o: &Observable) {
        self.range.touch(o.range);
        self.range_rate.touch(o.range_rate);
        self.range_accel.touch(o.range_accel);
        self.range_jerk.touch(o.range_jerk);
    }

    fn merge(&mut self, o: &SampleStats) {
        self.elevation.merge(&o.elevation);
        self.range.merge(&o.range);
        self.range_rate.merge(&o.range_rate);
        self.range_accel.merge(&o.range_accel);
        self.range_jerk.merge(&o.range_jerk);
    }
}

/// Same-plane pair differences.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SamePlaneStats {
    pub range: Extent,
    pub range_rate: Extent,
    pub range_accel: Extent,
}

impl SamePlaneStats {
    fn merge(&mut self, o: &SamePlaneStats) {
        self.range.merge(&o.range);
        self.range_rate.merge(&o.range_rate);
        self.range_accel.merge(&o.range_accel);
    }
}

/// Statistics of one observer (or a merge of several).
///
/// Group index 0 is the whole constellation, index `s + 1` is shell `s`.
/// Mask-indexed cells include every sample at or above that mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverStats {
    pub latitude: f64,
    pub masks: Vec<f64>,
    pub shells: Vec<String>,
    pub epochs: u64,
    pub pair_epochs: u64,
    pub samples: Vec<Vec<SampleStats>>,
    pub in_view: Vec<Vec<Extent>>,
    pub planes_in_view: Vec<Vec<Extent>>,
    pub same_plane_max: Vec<Vec<Extent>>,
    pub range_diff: Vec<Vec<Extent>>,
    /// Indexed by shell.
    pub same_plane: Vec<Vec<SamePlaneStats>>,
    /// Range rate by integer elevation degree 0..=90, per group.
    pub range_rate_by_elevation: Vec<Vec<Extent>>,
    pub range_rate_histogram: Vec<Vec<Histogram>>,
    /// Sampled (range rate, range acceleration) pairs at the lowest mask, per shell.
    pub envelope_samples: Vec<Vec<(f64, f64)>>,
    pub passes: Vec<PassRecord>,
}

impl ObserverStats {
    pub fn groups(&self) -> usize {
        self.shells.len() + 1
    }

    pub fn mask_index(&self, mask: f64) -> Option<usize> {
        self.masks.iter().position(|&m| (m - mask).abs() < 1e-9)
    }

    /// Fold `other` into `self`. Statistics become those of the pooled
    /// sample set; the latitude becomes NaN when they differ.
    pub fn merge(&mut self, other: &ObserverStats) -> Result<()> {
        if self.masks != other.masks || self.shells != other.shells {
            return Err(crate::error::Error::usage(
                "cannot merge statistics with different masks or shells",
            ));
        }
        if self.latitude != other.latitude {
            self.latitude = f64::NAN;
        }
        self.epochs += other.epochs;
        self.pair_epochs += other.pair_epochs;
        fn zip2<T>(a: &mut [Vec<T>], b: &[Vec<T>], f: impl Fn(&mut T, &T)) {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    f(x, y);
                }
            }
        }
        zip2(&mut self.samples, &other.samples, |a, b| a.merge(b));
        zip2(&mut self.in_view, &other.in_view, |a, b| a.merge(b));
        zip2(&mut self.planes_in_view, &other.planes_in_view, |a, b| a.merge(b));
        zip2(&mut self.same_plane_max, &other.same_plane_max, |a, b| a.merge(b));
        zip2(&mut self.range_diff, &other.range_diff, |a, b| a.merge(b));
        zip2(&mut self.same_plane, &other.same_plane, |a, b| a.merge(b));
        zip2(&mut self.range_rate_by_elevation, &other.range_rate_by_elevation, |a, b| a.merge(b));
        for (ra, rb) in self.range_rate_histogram.iter_mut().zip(&other.range_rate_histogram) {
            for (x, y) in ra.iter_mut().zip(rb) {
                x.merge(y)?;
            }
        }
        for (a, b) in self.envelope_samples.iter_mut().zip(&other.envelope_samples) {
            a.extend_from_slice(b);
        }
        self.passes.extend_from_slice(&other.passes);
        Ok(())
    }

    /// Largest |range rate| at elevation >= `mask_deg` (integer degrees), per group.
    pub fn max_abs_range_rate_above(&self, group: usize, mask_deg: usize) -> Option<f64> {
        let bins = &self.range_rate_by_elevation[group];
        let mut e = Extent::default();
        for b in &bins[mask_deg.min(90)..] {
            e.merge(b);
        }
        e.max_abs()
    }
}

/// [`EpochSink`] building an [`ObserverStats`].
pub struct Collector {
    cfg: MetricsConfig,
    latitude: f64,
    shells: Vec<String>,
    sat_shell: Vec<usize>,
    plane_shell: Vec<usize>,
    epochs: u64,
    pair_epochs: u64,
    samples: Vec<Vec<SampleStats>>,
    in_view: Vec<Vec<Extent>>,
    planes_in_view: Vec<Vec<Extent>>,
    same_plane_max: Vec<Vec<Extent>>,
    range_diff: Vec<Vec<Extent>>,
    same_plane: Vec<Vec<SamePlaneStats>>,
    rr_by_el: Vec<Vec<Extent>>,
    hist: Vec<Vec<Histogram>>,
    envelope: Vec<Vec<(f64, f64)>>,
    trackers: Vec<Vec<PassTracker>>,
    last_seen: Vec<Option<Observable>>,
    passes: Vec<PassRecord>,
    // scratch
    levels: Vec<usize>,
    group_band_counts: Vec<Vec<u32>>,
    plane_band_counts: Vec<Vec<u32>>,
}

impl Collector {
    pub fn new(constellation: &Constellation, latitude: f64, cfg: MetricsConfig) -> Result<Self> {
        if cfg.masks.is_empty() || cfg.masks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(crate::error::Error::config(
                "masks must be non-empty and strictly ascending",
            ));
        }
        if cfg.pair_stride == 0 || cfg.envelope_stride == Some(0) {
            return Err(crate::error::Error::config("strides must be positive"));
        }
        let shells: Vec<String> = constellation.shells.iter().map(|s| s.name.clone()).collect();
        let groups = shells.len() + 1;
        let nm = cfg.masks.len();
        let mut plane_shell = Vec::new();
        for (i, s) in constellation.shells.iter().enumerate() {
            plane_shell.extend(std::iter::repeat(i).take(s.planes));
        }
        let hist = Histogram::uniform(-cfg.range_rate_span, cfg.range_rate_span, cfg.histogram_bins)?;
        let nsat = constellation.satellites.len();
        Ok(Self {
            latitude,
            sat_shell: constellation.satellites.iter().map(|s| s.shell_index).collect(),
            epochs: 0,
            pair_epochs: 0,
            samples: vec![vec![SampleStats::default(); nm]; groups],
            in_view: vec![vec![Extent::default(); nm]; groups],
            planes_in_view: vec![vec![Extent::default(); nm]; groups],
            same_plane_max: vec![vec![Extent::default(); nm]; groups],
            range_diff: vec![vec![Extent::default(); nm]; groups],
            same_plane: vec![vec![SamePlaneStats::default(); nm]; shells.len()],
            rr_by_el: vec![vec![Extent::default(); 91]; groups],
            hist: vec![vec![hist; nm]; groups],
            envelope: vec![Vec::new(); shells.len()],
            trackers: vec![vec![PassTracker::default(); nsat]; nm],
            last_seen: vec![None; nsat],
            passes: Vec::new(),
            levels: Vec::with_capacity(nsat),
            group_band_counts: vec![vec![0; nm]; groups],
            plane_band_counts: vec![vec![0; nm]; plane_shell.len()],
            plane_shell,
            shells,
            cfg,
        })
    }

    fn level(&self, elevation: f64) -> usize {
        self.cfg.masks.iter().take_while(|&&m| elevation >= m).count()
    }

    fn pairs(&mut self, visible: &[(usize, Observable)]) {
        self.pair_epochs += 1;
        for (i, (_, a)) in visible.iter().enumerate() {
            let la = self.levels[i];
            for (j, (_, b)) in visible.iter().enumerate().skip(i + 1) {
                let band = la.min(self.levels[j]) - 1;
                let dr = (a.range - b.range).abs();
                self.range_diff[0][band].push(dr);
                if a.shell_index == b.shell_index {
                    self.range_diff[a.shell_index + 1][band].push(dr);
                    if a.plane_index == b.plane_index {
                        let sp = &mut self.same_plane[a.shell_index][band];
                        sp.range.push(dr);
                        sp.range_rate.push((a.range_rate - b.range_rate).abs());
                        sp.range_accel.push((a.range_accel - b.range_accel).abs());
                    }
                }
            }
        }
    }

    pub fn into_stats(self) -> ObserverStats {
        fn fold<T: Clone>(rows: Vec<Vec<T>>, merge: impl Fn(&mut T, &T)) -> Vec<Vec<T>> {
            rows.into_iter()
                .map(|mut r| {
                    for i in (0..r.len().saturating_sub(1)).rev() {
                        let next = r[i + 1].clone();
                        merge(&mut r[i], &next);
                    }
                    r
                })
                .collect()
        }
        let mut hist = self.hist;
        for row in &mut hist {
            for i in (0..row.len().saturating_sub(1)).rev() {
                let next = row[i + 1].clone();
                row[i].merge(&next).expect("identical edges");
            }
        }
        ObserverStats {
            latitude: self.latitude,
            masks: self.cfg.masks,
            shells: self.shells,
            epochs: self.epochs,
            pair_epochs: self.pair_epochs,
            samples: fold(self.samples, |a, b| a.merge(b)),
            in_view: self.in_view,
            planes_in_view: self.planes_in_view,
            same_plane_max: self.same_plane_max,
            range_diff: fold(self.range_diff, |a, b| a.merge(b)),
            same_plane: fold(self.same_plane, |a, b| a.merge(b)),
            range_rate_by_elevation: self.rr_by_el,
            range_rate_histogram: hist,
            envelope_samples: self.envelope,
            passes: self.passes,
        }
    }
}

impl EpochSink for Collector {
    fn epoch(&mut self, k: usize, _t: f64, visible: &[(usize, Observable)]) {
        self.epochs += 1;
        let nm = self.cfg.masks.len();
        self.levels.clear();
        for row in &mut self.group_band_counts {
            row.iter_mut().for_each(|c| *c = 0);
        }
        for row in &mut self.plane_band_counts {
            row.iter_mut().for_each(|c| *c = 0);
        }
        for &(si, ref o) in visible {
            let level = self.level(o.elevation);
            self.levels.push(level);
            let band = level - 1;
            let g = o.shell_index + 1;
            for gi in [0, g] {
                self.samples[gi][band].push(o);
                self.hist[gi][band].push(o.range_rate);
                self.group_band_counts[gi][band] += 1;
                if o.elevation >= 0.0 {
                    let deg = (o.elevation.floor() as usize).min(90);
                    self.rr_by_el[gi][deg].push(o.range_rate);
                }
            }
            self.plane_band_counts[o.plane_index][band] += 1;
            for m in 0..level {
                let tr = &mut self.trackers[m][si];
                if k == 0 && !tr.is_open() {
                    tr.rise(o, true);
                } else {
                    tr.update(o.elevation);
                }
            }
            self.last_seen[si] = Some(*o);
        }
        debug_assert_eq!(self.sat_shell.len(), self.last_seen.len());

        let groups = self.shells.len() + 1;
        for g in 0..groups {
            let mut cum = 0u32;
            for m in (0..nm).rev() {
                cum += self.group_band_counts[g][m];
                self.in_view[g][m].push(cum as f64);
            }
        }
        // Planes: per-mask count of planes with a visible member and the
        // largest per-plane count, overall and per shell.
        let mut planes = vec![vec![0u32; nm]; groups];
        let mut best = vec![vec![0u32; nm]; groups];
        for (p, row) in self.plane_band_counts.iter().enumerate() {
            let g = self.plane_shell[p] + 1;
            let mut cum = 0u32;
            for m in (0..nm).rev() {
                cum += row[m];
                if cum > 0 {
                    planes[0][m] += 1;
                    planes[g][m] += 1;
                }
                best[0][m] = best[0][m].max(cum);
                best[g][m] = best[g][m].max(cum);
            }
        }
        for g in 0..groups {
            for m in 0..nm {
                self.planes_in_view[g][m].push(planes[g][m] as f64);
                self.same_plane_max[g][m].push(best[g][m] as f64);
            }
        }

        if k % self.cfg.pair_stride == 0 {
            self.pairs(visible);
        }
        if let Some(stride) = self.cfg.envelope_stride {
            if k % stride == self.cfg.envelope_offset % stride {
                for (_, o) in visible {
                    self.envelope[o.shell_index].push((o.range_rate, o.range_accel));
                }
            }
        }
    }

    fn crossing(&mut self, c: &Crossing) {
        let o = &c.at;
        let g = o.shell_index + 1;
        self.samples[0][c.mask_index].touch(o);
        self.samples[g][c.mask_index].touch(o);
        let mask = self.cfg.masks[c.mask_index];
        let tr = &mut self.trackers[c.mask_index][c.sat];
        if c.rising {
            tr.rise(o, false);
        } else if let Some(p) = tr.set(o, mask, false) {
            self.passes.push(p);
        }
    }

    fn finish(&mut self, _grid: &TimeGrid) {
        for (m, row) in self.trackers.iter_mut().enumerate() {
            for (si, tr) in row.iter_mut().enumerate() {
                if tr.is_open() {
                    if let Some(last) = &self.last_seen[si] {
                        self.passes.extend(tr.set(last, self.cfg.masks[m], true));
                    }
                }
            }
        }
        self.passes
            .sort_by(|a, b| a.mask.total_cmp(&b.mask).then(a.svid.cmp(&b.svid)).then(a.rise.total_cmp(&b.rise)));
    }
}
