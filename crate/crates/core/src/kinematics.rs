//! Per-shell kinematic constants: period, orbital speed, extreme Earth-fixed
//! speed and the observer-side extremes taken from a visibility sweep.

use std::f64::consts::TAU;

use crate::bands::Band;
use crate::constants::SPEED_OF_LIGHT;
use crate::constellation::{orbital_constants, propagate, Constellation, Satellite};
use crate::error::Result;
use crate::metrics::SweepResults;

/// L1-band and L5-band signals of a constellation.
pub fn signal_bands(constellation_name: &str) -> (Band, Band) {
    if constellation_name.starts_with("gps") {
        (Band::L1CA, Band::L5)
    } else {
        (Band::X1, Band::X5)
    }
}

/// Largest Earth-fixed speed along the orbit of `sat`.
///
/// The Earth-fixed speed depends only on the argument of latitude, so one
/// period is sampled densely and the best sample refined by golden section.
pub fn max_ecef_speed(sat: &Satellite) -> f64 {
    let period = sat.period();
    let n = 3600;
    let speed = |t: f64| propagate(sat, t).velocity.norm();
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let t = period * k as f64 / n as f64;
        let v = speed(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let h = period / n as f64;
    let (mut a, mut b) = (best_t - h, best_t + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if speed(c) > speed(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(speed(0.5 * (a + b)))
}

/// One column of the constellation summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellKinematics {
    pub constellation: String,
    pub shell: String,
    pub planes: usize,
    pub sats_per_plane: usize,
    pub inclination_deg: f64,
    pub altitude_km: f64,
    pub orbit_radius: f64,
    pub perimeter: f64,
    pub period_s: f64,
    pub speed: f64,
    pub max_ecef_speed: f64,
    /// From a sweep, when one was supplied.
    pub max_relative_speed: Option<f64>,
    pub l1_band: Band,
    pub l5_band: Band,
}

impl ShellKinematics {
    pub fn max_doppler(&self, band: Band) -> Option<f64> {
        self.max_relative_speed
            .map(|v| v * band.carrier() / SPEED_OF_LIGHT)
    }
}

/// Summary columns for every shell of `constellation`. `sweep` (mask 0 at
/// its lowest mask) supplies the observer-side maxima; it is matched by
/// constellation name.
pub fn shell_kinematics(
    constellation: &Constellation,
    sweep: Option<&SweepResults>,
) -> Result<Vec<ShellKinematics>> {
    let (l1_band, l5_band) = signal_bands(&constellation.name);
    let sweep = sweep.filter(|s| s.constellation == constellation.name);
    constellation
        .shells
        .iter()
        .enumerate()
        .map(|(i, shell)| {
            let radius = shell.orbit_radius(constellation.altitude_reference);
            let k = orbital_constants(radius)?;
            let sat = constellation
                .satellites
                .iter()
                .find(|s| s.shell_index == i)
                .expect("shells are non-empty");
            let max_relative_speed = sweep.and_then(|s| {
                let g = s.group_index(&shell.name).ok()?;
                s.combined(|_| true)
                    .and_then(|c| c.samples[g][0].range_rate.max_abs())
            });
            Ok(ShellKinematics {
                constellation: constellation.name.clone(),
                shell: shell.name.clone(),
                planes: shell.planes,
                sats_per_plane: shell.sats_per_plane,
                inclination_deg: shell.inclination_deg,
                altitude_km: shell.altitude_km,
                orbit_radius: radius,
                perimeter: TAU * radius,
                period_s: k.period_s,
                speed: k.speed,
                max_ecef_speed: max_ecef_speed(sat),
                max_relative_speed,
                l1_band,
                l5_band,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{build_nominal, AltitudeReference, NominalConstellation};
    use crate::constants::OMEGA_EARTH;

    #[test]
    fn ecef_speed_extremes() {
        let c = build_nominal(NominalConstellation::PulsarFoc, AltitudeReference::Mean);
        let rows = shell_kinematics(&c, None).unwrap();
        let inclined = &rows[0];
        let polar = &rows[1];
        assert!((polar.max_ecef_speed - 7400.0).abs() / 7400.0 < 2e-3);
        assert!((inclined.max_ecef_speed - 7000.6).abs() / 7000.6 < 2e-3);
        for r in &rows {
            assert!(r.max_ecef_speed <= r.speed + OMEGA_EARTH * r.orbit_radius);
            assert!(r.max_relative_speed.is_none());
        }
        assert!((polar.perimeter / 1e3 - 46816.0).abs() < 0.5);
    }
}
