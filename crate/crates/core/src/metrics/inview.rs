use crate::observables::{visible, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    All,
    Shell(usize),
    Plane(usize),
    /// Largest per-plane visible count.
    SamePlaneMax,
    /// Number of distinct planes with at least one visible satellite.
    PlanesInView,
}

/// Visible-satellite count of one epoch under a grouping.
pub fn count_in_view(epoch: &[Observable], mask: f64, group_by: GroupBy) -> usize {
    let vis = epoch.iter().filter(|o| visible(o, mask));
    match group_by {
        GroupBy::All => vis.count(),
        GroupBy::Shell(s) => vis.filter(|o| o.shell_index == s).count(),
        GroupBy::Plane(p) => vis.filter(|o| o.plane_index == p).count(),
        GroupBy::SamePlaneMax | GroupBy::PlanesInView => {
            let mut per_plane = std::collections::BTreeMap::<usize, usize>::new();
            for o in vis {
                *per_plane.entry(o.plane_index).or_default() += 1;
            }
            if group_by == GroupBy::PlanesInView {
                per_plane.len()
            } else {
                per_plane.values().copied().max().unwrap_or(0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(plane: usize, shell: usize, el: f64) -> Observable {
        Observable {
            time: 0.0,
            svid: 0,
            prn_id: 0,
            plane_index: plane,
            shell_index: shell,
            elevation: el,
            azimuth: 0.0,
            zenith: false,
            range: 1.0,
            range_rate: 0.0,
            range_accel: 0.0,
            range_jerk: 0.0,
        }
    }

    #[test]
    fn groupings() {
        let e = [o(0, 0, 5.0), o(0, 0, 15.0), o(3, 1, 20.0), o(4, 1, -1.0)];
        assert_eq!(count_in_view(&e, 0.0, GroupBy::All), 3);
        assert_eq!(count_in_view(&e, 10.0, GroupBy::All), 2);
        assert_eq!(count_in_view(&e, 0.0, GroupBy::Shell(1)), 1);
        assert_eq!(count_in_view(&e, 0.0, GroupBy::Plane(0)), 2);
        assert_eq!(count_in_view(&e, 0.0, GroupBy::SamePlaneMax), 2);
        assert_eq!(count_in_view(&e, 0.0, GroupBy::PlanesInView), 2);
        assert_eq!(count_in_view(&[], 0.0, GroupBy::SamePlaneMax), 0);
    }
}
