use crate::bands::Band;
use crate::observables::{visible, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairQuantity {
    Range,
    Doppler(Band),
    DopplerRate(Band),
}

impl PairQuantity {
    fn value(self, o: &Observable) -> f64 {
        match self {
            PairQuantity::Range => o.range,
            PairQuantity::Doppler(b) => o.doppler(b),
            PairQuantity::DopplerRate(b) => o.doppler_rate(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairScope {
    All,
    SamePlane,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDiffSample {
    pub time: f64,
    pub scope: PairScope,
    pub quantity: PairQuantity,
    pub svid_a: u32,
    pub svid_b: u32,
    pub value: f64,
}

/// Absolute differences over all unordered visible pairs of one epoch.
/// `shell` restricts both members to one shell.
pub fn pairwise_differences(
    epoch: &[Observable],
    mask: f64,
    quantity: PairQuantity,
    scope: PairScope,
    shell: Option<usize>,
) -> Vec<PairDiffSample> {
    let vis: Vec<&Observable> = epoch
        .iter()
        .filter(|o| visible(o, mask) && shell.map_or(true, |s| o.shell_index == s))
        .collect();
    let mut out = Vec::new();
    for (i, a) in vis.iter().enumerate() {
        for b in &vis[i + 1..] {
            if a.svid == b.svid {
                continue;
            }
            if scope == PairScope::SamePlane && a.plane_index != b.plane_index {
                continue;
            }
            out.push(PairDiffSample {
                time: a.time,
                scope,
                quantity,
                svid_a: a.svid,
                svid_b: b.svid,
                value: (quantity.value(a) - quantity.value(b)).abs(),
            });
        }
    }
    out
}
