//! Ordered Doppler search plans.
//!
//! Descending plans start with a bin centred on the Doppler limit and step
//! down by the bin width; ascending plans start at 0 Hz and alternate sign
//! outward, positive first. Cells at the far edge are cut at the limit.
//! Exclusions (around tracked Dopplers, and the band a second satellite of
//! the same plane cannot occupy) are cut out of the cells.

use std::fmt::Write as _;

use super::calibration::Calibration;
use super::OrbitClass;
use crate::bands::Band;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    ColdStart,
    Operation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Environment {
    OpenSky,
    /// Lowest usable elevation, degrees.
    Urban { mask: f64 },
}

impl Environment {
    pub fn mask(self) -> f64 {
        match self {
            Environment::OpenSky => 0.0,
            Environment::Urban { mask } => mask,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LargePositiveFirst,
    HighElevationFirst,
    ZeroFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PrnState {
    NewPrn,
    /// Dopplers (Hz) of satellites already tracked on this PRN.
    Tracked(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub phase: Phase,
    pub environment: Environment,
    /// `None` picks the default for the phase and environment.
    pub strategy: Option<Strategy>,
    pub prn_state: PrnState,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.strategy == Some(Strategy::HighElevationFirst) && self.environment == Environment::OpenSky {
            return Err(Error::usage("high-elevation-first applies to urban environments only"));
        }
        if let Environment::Urban { mask } = self.environment {
            if !(0.0..=90.0).contains(&mask) {
                return Err(Error::usage(format!("urban mask {mask} outside 0..=90")));
            }
        }
        if let PrnState::Tracked(d) = &self.prn_state {
            if d.is_empty() {
                return Err(Error::usage("prn-already-tracked needs at least one tracked Doppler"));
            }
            if d.iter().any(|x| !x.is_finite()) {
                return Err(Error::usage("tracked Dopplers must be finite"));
            }
        }
        Ok(())
    }

    /// Strategy actually used.
    pub fn resolved_strategy(&self) -> Strategy {
        if let Some(s) = self.strategy {
            return s;
        }
        match (self.phase, self.environment, &self.prn_state) {
            (Phase::ColdStart, _, _) => Strategy::LargePositiveFirst,
            (Phase::Operation, Environment::OpenSky, PrnState::NewPrn) => Strategy::ZeroFirst,
            // A satellite rising behind tracked members of its plane, or a
            // new plane appearing above an urban mask, starts approaching.
            (Phase::Operation, _, _) => Strategy::LargePositiveFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Bin {
    fn new(lo: f64, hi: f64) -> Self {
        Self { center: 0.5 * (lo + hi), lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Half-open membership [lo, hi).
    pub fn contains(&self, f: f64) -> bool {
        f >= self.lo && f < self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanOptions {
    pub bin_width: f64,
    /// Half-width of the exclusion around each tracked Doppler; default 2 bins.
    pub exclusion_half_width: Option<f64>,
    /// Replace the calibrated Doppler limit.
    pub limit_override: Option<f64>,
}

impl PlanOptions {
    pub fn new(bin_width: f64) -> Self {
        Self { bin_width, exclusion_half_width: None, limit_override: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchPlan {
    pub band: Band,
    pub orbit_class: OrbitClass,
    pub strategy: Strategy,
    pub bin_width: f64,
    /// Searched span is [-f_limit, +f_limit].
    pub f_limit: f64,
    /// In search order.
    pub bins: Vec<Bin>,
    /// Merged, sorted, closed intervals.
    pub exclusions: Vec<(f64, f64)>,
    /// Grid cells dropped entirely by exclusions.
    pub removed: Vec<Bin>,
}

impl SearchPlan {
    /// Search position of the bin holding `f`.
    pub fn rank_of(&self, f: f64) -> Option<usize> {
        self.bins.iter().position(|b| b.contains(f)).or_else(|| {
            // The top edge of the span belongs to the bin that reaches it.
            self.bins.iter().position(|b| f == b.hi && f <= self.f_limit)
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("order_index,center_hz,lo_hz,hi_hz,excluded\n");
        for (i, b) in self.bins.iter().enumerate() {
            let _ = writeln!(s, "{i},{:.3},{:.3},{:.3},0", b.center, b.lo, b.hi);
        }
        for (i, b) in self.removed.iter().enumerate() {
            let _ = writeln!(s, "{},{:.3},{:.3},{:.3},1", self.bins.len() + i, b.center, b.lo, b.hi);
        }
        s
    }

    pub fn summary(&self) -> String {
        let strategy = match self.strategy {
            Strategy::LargePositiveFirst => "large-positive-first",
            Strategy::HighElevationFirst => "high-elevation-first",
            Strategy::ZeroFirst => "zero-first",
        };
        let mut s = format!(
            "band {} orbit {} strategy {strategy}\nlimit +/-{:.1} Hz, bin width {:.3} Hz, {} bins\n",
            self.band.name(),
            self.orbit_class.as_str(),
            self.f_limit,
            self.bin_width,
            self.bins.len()
        );
        if let (Some(a), Some(b)) = (self.bins.first(), self.bins.last()) {
            let _ = writeln!(s, "first center {:.1} Hz, last center {:.1} Hz", a.center, b.center);
        }
        for (lo, hi) in &self.exclusions {
            let _ = writeln!(s, "excluded {:.1} .. {:.1} Hz", lo, hi);
        }
        s
    }
}

fn merge(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// `bin` minus the closed `exclusions`.
fn trim(bin: Bin, exclusions: &[(f64, f64)]) -> Vec<Bin> {
    let mut pieces = vec![(bin.lo, bin.hi)];
    for &(a, b) in exclusions {
        let mut next = Vec::new();
        for (lo, hi) in pieces {
            if b <= lo || a >= hi {
                next.push((lo, hi));
                continue;
            }
            if a > lo {
                next.push((lo, a));
            }
            if b < hi {
                next.push((b, hi));
            }
        }
        pieces = next;
    }
    pieces
        .into_iter()
        .filter(|(lo, hi)| hi - lo > 1e-9)
        .map(|(lo, hi)| Bin::new(lo, hi))
        .filter(|b| !exclusions.iter().any(|&(a, e)| b.center >= a && b.center <= e))
        .collect()
}

fn descending_grid(limit: f64, w: f64) -> Vec<Bin> {
    let mut out = Vec::new();
    let mut hi = limit + 0.5 * w;
    let mut k = 0u64;
    loop {
        let lo = limit + 0.5 * w - (k + 1) as f64 * w;
        if lo <= -limit {
            out.push(Bin::new(-limit, hi));
            break;
        }
        out.push(Bin { center: limit - k as f64 * w, lo, hi });
        hi = lo;
        k += 1;
    }
    out
}

fn ascending_grid(limit: f64, w: f64) -> Vec<Bin> {
    let mut out = vec![Bin::new(-(0.5 * w).min(limit), (0.5 * w).min(limit))];
    let mut k = 1u64;
    while (k as f64 - 0.5) * w < limit {
        let lo = (k as f64 - 0.5) * w;
        let hi = ((k as f64 + 0.5) * w).min(limit);
        out.push(Bin::new(lo, hi));
        out.push(Bin::new(-hi, -lo));
        k += 1;
    }
    out
}

fn order(bins: &mut [Bin], strategy: Strategy) {
    match strategy {
        Strategy::LargePositiveFirst => bins.sort_by(|a, b| b.center.total_cmp(&a.center)),
        _ => bins.sort_by(|a, b| {
            a.center.abs().total_cmp(&b.center.abs()).then(b.center.total_cmp(&a.center))
        }),
    }
}

pub fn plan_doppler(
    scenario: &Scenario,
    band: Band,
    orbit_class: OrbitClass,
    options: PlanOptions,
    calibration: &Calibration,
) -> Result<SearchPlan> {
    scenario.validate()?;
    let w = options.bin_width;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::usage(format!("bin width must be positive, got {w}")));
    }
    let cal = calibration.class(orbit_class)?;
    let mask = scenario.environment.mask();
    let limit = match options.limit_override {
        Some(l) if l > 0.0 && l.is_finite() => l,
        Some(l) => return Err(Error::usage(format!("Doppler limit must be positive, got {l}"))),
        None => cal.doppler_limit(band, mask)?,
    };
    if limit / w > 1e7 {
        return Err(Error::usage("bin width too small for the Doppler span"));
    }
    let strategy = scenario.resolved_strategy();
    let grid = match strategy {
        Strategy::LargePositiveFirst => descending_grid(limit, w),
        _ => ascending_grid(limit, w),
    };
    let mut exclusions = Vec::new();
    if let PrnState::Tracked(tracked) = &scenario.prn_state {
        let hw = options.exclusion_half_width.unwrap_or(2.0 * w);
        if !(hw >= 0.0) {
            return Err(Error::usage("exclusion half-width must be non-negative"));
        }
        let gap = cal.min_same_plane_doppler_diff(band, mask.min(cal.min_same_plane_diff.last().map_or(0.0, |x| x.0)))?;
        for &d in tracked {
            let r = hw.max(gap);
            exclusions.push((d - r, d + r));
        }
    }
    let exclusions = merge(exclusions);
    let mut bins = Vec::new();
    let mut removed = Vec::new();
    for cell in grid {
        let pieces = trim(cell, &exclusions);
        if pieces.is_empty() {
            removed.push(cell);
        }
        bins.extend(pieces);
    }
    order(&mut bins, strategy);
    Ok(SearchPlan { band, orbit_class, strategy, bin_width: w, f_limit: limit, bins, exclusions, removed })
}
