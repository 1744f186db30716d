//! Statistics over observable time series: passes, in-view counts,
//! distributions, elevation-mask sweeps, pairwise differences and the
//! table layouts built from them.

pub mod collector;
pub mod histogram;
pub mod inview;
pub mod pairwise;
pub mod passes;
pub mod replay;
pub mod store;
pub mod sweep;
pub mod tables;

pub use collector::{Collector, MetricsConfig, ObserverStats, SamePlaneStats, SampleStats};
pub use histogram::Histogram;
pub use inview::{count_in_view, GroupBy};
pub use pairwise::{pairwise_differences, PairDiffSample, PairQuantity, PairScope};
pub use passes::{duration_summary, extract_passes, PassRecord};
pub use replay::replay;
pub use store::StatsStore;
pub use tables::{report_tables, ReportTable, Value};
pub use sweep::{run_sweep, Cell, Metric, SweepResults, SweepTable};

/// Running count, sum, minimum and maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub count: u64,
    pub sum: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for Extent {
    fn default() -> Self {
        Self {
            count: 0,
            sum: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl Extent {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.touch(x);
    }

    /// Update the extremes without counting a sample.
    #[inline]
    pub fn touch(&mut self, x: f64) {
        if x < self.min {
            self.min = x;
        }
        if x > self.max {
            self.max = x;
        }
    }

    pub fn merge(&mut self, o: &Extent) {
        self.count += o.count;
        self.sum += o.sum;
        self.min = self.min.min(o.min);
        self.max = self.max.max(o.max);
    }

    pub fn is_empty(&self) -> bool {
        self.min > self.max
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }

    pub fn min(&self) -> Option<f64> {
        (!self.is_empty()).then_some(self.min)
    }

    pub fn max(&self) -> Option<f64> {
        (!self.is_empty()).then_some(self.max)
    }

    pub fn max_abs(&self) -> Option<f64> {
        (!self.is_empty()).then(|| self.min.abs().max(self.max.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::Extent;

    #[test]
    fn extent_basics() {
        let mut e = Extent::default();
        assert!(e.is_empty() && e.mean().is_none());
        e.push(2.0);
        e.push(-4.0);
        e.touch(10.0);
        assert_eq!((e.count, e.min, e.max), (2, -4.0, 10.0));
        assert_eq!(e.mean(), Some(-1.0));
        assert_eq!(e.max_abs(), Some(10.0));
    }
}
